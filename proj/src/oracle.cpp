#include <algorithm>
#include <bitset>
#include <functional>
#include <map>
#include <sstream>

#include "wmm/oracle.hpp"

namespace wmm::oracle {

namespace {

constexpr size_t kMaxEvents = 128;
using Row = std::bitset<kMaxEvents>;

struct Rel {
    std::vector<Row> r;
    explicit Rel(size_t n) : r(n) {}
    void add(int a, int b) { r[a].set(b); }
    bool has(int a, int b) const { return r[a].test(b); }
    void close() {
        const size_t n = r.size();
        for (size_t k = 0; k < n; ++k) {
            for (size_t i = 0; i < n; ++i) {
                if (r[i].test(k)) r[i] |= r[k];
            }
        }
    }
    bool cyclic() const {
        for (size_t i = 0; i < r.size(); ++i) {
            if (r[i].test(i)) return true;
        }
        return false;
    }
};

Verdict fail(const std::string& tag, const Execution& x, std::initializer_list<int> evs) {
    Verdict v{false, tag, ""};
    for (int e : evs) {
        if (!v.detail.empty()) v.detail += " ";
        v.detail += x.events[e].name;
    }
    return v;
}

}  // namespace

Verdict check_consistent(const Execution& x) {
    const int n = static_cast<int>(x.events.size());
    if (static_cast<size_t>(n) > kMaxEvents) throw Unsupported("execution too large for the oracle");
    const auto& ev = x.events;

    std::vector<int> mopos(n, -1), scpos(n, -1);
    for (const auto& order : x.mo) {
        for (size_t i = 0; i < order.size(); ++i) mopos[order[i]] = static_cast<int>(i);
    }
    for (size_t i = 0; i < x.sc.size(); ++i) scpos[x.sc[i]] = static_cast<int>(i);
    auto mo = [&](int a, int b) {
        return ev[a].writes() && ev[b].writes() && ev[a].loc == ev[b].loc && mopos[a] < mopos[b];
    };
    auto sc = [&](int a, int b) { return scpos[a] >= 0 && scpos[b] >= 0 && scpos[a] < scpos[b]; };
    auto rf = [&](int r) { return x.rf[r]; };

    // rf must be well formed before anything else reads it.
    for (int r = 0; r < n; ++r) {
        if (!ev[r].reads()) continue;
        int w = rf(r);
        if (w < 0 || w >= n || !ev[w].writes() || ev[w].loc != ev[r].loc || ev[w].wval != ev[r].rval) {
            return fail("rf-wellformed", x, {r});
        }
    }

    Rel sbt(n);
    for (auto [a, b] : x.sb) sbt.add(a, b);
    sbt.close();

    // Release sequences: the head plus the mo-contiguous RMWs after it.
    auto in_rs = [&](int head, int w) {
        if (!ev[head].writes() || ev[head].loc != ev[w].loc || mopos[head] > mopos[w]) return false;
        const auto& order = x.mo[ev[w].loc];
        for (int i = mopos[head] + 1; i <= mopos[w]; ++i) {
            if (ev[order[i]].kind != EventKind::Rmw) return false;
        }
        return true;
    };

    Rel hb(n);
    for (int a = 0; a < n; ++a) {
        hb.r[a] |= sbt.r[a];
        if (ev[a].kind == EventKind::Init) {
            for (int b = 0; b < n; ++b) {
                if (ev[b].kind != EventKind::Init) hb.add(a, b);
            }
        }
    }
    for (auto [a, b] : x.asw) hb.add(a, b);

    for (int b = 0; b < n; ++b) {
        if (!ev[b].reads()) continue;
        const int w = rf(b);
        for (int a = 0; a < n; ++a) {
            if (!in_rs(a, w) || ev[a].kind == EventKind::Init) continue;
            // a heads a (possibly hypothetical) release sequence containing w.
            std::vector<int> releasers;
            if (is_release(ev[a].mo)) releasers.push_back(a);
            for (int f = 0; f < n; ++f) {
                if (ev[f].fence() && is_release(ev[f].mo) && sbt.has(f, a)) releasers.push_back(f);
            }
            std::vector<int> acquirers;
            if (is_acquire(ev[b].mo)) acquirers.push_back(b);
            for (int g = 0; g < n; ++g) {
                if (ev[g].fence() && is_acquire(ev[g].mo) && sbt.has(b, g)) acquirers.push_back(g);
            }
            for (int s : releasers) {
                for (int t : acquirers) {
                    if (s != t) hb.add(s, t);
                }
            }
        }
    }
    hb.close();

    if (hb.cyclic()) {
        for (int a = 0; a < n; ++a) {
            if (hb.has(a, a)) return fail("hb-cycle", x, {a});
        }
    }

    for (int r = 0; r < n; ++r) {
        if (ev[r].kind == EventKind::Rmw && mopos[rf(r)] + 1 != mopos[r]) return fail("rmw-atomicity", x, {r});
    }
    for (int r = 0; r < n; ++r) {
        if (ev[r].reads() && hb.has(r, rf(r))) return fail("rf-hb", x, {r, rf(r)});
    }

    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b || !hb.has(a, b) || ev[a].loc != ev[b].loc) continue;
            const bool aw = ev[a].writes(), ar = ev[a].reads(), bw = ev[b].writes(), br = ev[b].reads();
            if (aw && bw && mo(b, a)) return fail("CoWW", x, {a, b});
            if (aw && br && mo(rf(b), a)) return fail("CoWR", x, {a, b});
            if (ar && bw && mo(b, rf(a))) return fail("CoRW", x, {a, b});
            if (ar && br && mo(rf(b), rf(a))) return fail("CoRR", x, {a, b});
        }
    }

    for (int a : x.sc) {
        for (int b : x.sc) {
            if (hb.has(a, b) && sc(b, a)) return fail("sc-hb", x, {a, b});
            if (mo(a, b) && sc(b, a)) return fail("sc-mo", x, {a, b});
        }
    }

    auto sc_write_at = [&](int e, LocId loc) { return ev[e].sc() && ev[e].writes() && ev[e].loc == loc; };

    for (int r : x.sc) {
        if (!ev[r].reads()) continue;
        const int w = rf(r);
        if (ev[w].sc()) {
            if (!sc(w, r)) return fail("sc-read", x, {r, w});
            for (int w2 : x.sc) {
                if (sc_write_at(w2, ev[r].loc) && sc(w, w2) && sc(w2, r)) return fail("sc-read", x, {r, w, w2});
            }
        } else {
            for (int w2 : x.sc) {
                if (sc_write_at(w2, ev[r].loc) && hb.has(w, w2) && sc(w2, r)) return fail("sc-read", x, {r, w, w2});
            }
        }
    }

    std::vector<int> fences;
    for (int f : x.sc) {
        if (ev[f].fence()) fences.push_back(f);
    }

    // Fence sb read: the read may not see anything mo-before an sc write
    // that precedes the fence.
    for (int f : fences) {
        for (int r = 0; r < n; ++r) {
            if (!ev[r].reads() || !sbt.has(f, r)) continue;
            for (int w2 : x.sc) {
                if (sc_write_at(w2, ev[r].loc) && sc(w2, f) && mo(rf(r), w2)) {
                    return fail("sc-fence-read", x, {f, r, w2});
                }
            }
        }
    }
    // Write sb fence, fence sc-before an sc read of that location.
    for (int f : fences) {
        for (int w = 0; w < n; ++w) {
            if (!ev[w].writes() || !sbt.has(w, f)) continue;
            for (int r : x.sc) {
                if (ev[r].reads() && ev[r].loc == ev[w].loc && sc(f, r) && mo(rf(r), w)) {
                    return fail("sc-fence-write-read", x, {w, f, r});
                }
            }
        }
    }
    // Write sb fence, sc-before fence', fence' sb read.
    for (int f : fences) {
        for (int f2 : fences) {
            if (!sc(f, f2)) continue;
            for (int w = 0; w < n; ++w) {
                if (!ev[w].writes() || !sbt.has(w, f)) continue;
                for (int r = 0; r < n; ++r) {
                    if (ev[r].reads() && ev[r].loc == ev[w].loc && sbt.has(f2, r) && mo(rf(r), w)) {
                        return fail("sc-fence-fence-read", x, {w, f, f2, r});
                    }
                }
            }
        }
    }
    // The write-write forms of the same three shapes.
    for (int f : fences) {
        for (int w = 0; w < n; ++w) {
            if (!ev[w].writes() || !sbt.has(w, f)) continue;
            for (int f2 : fences) {
                if (!sc(f, f2)) continue;
                for (int w2 = 0; w2 < n; ++w2) {
                    if (w2 != w && ev[w2].writes() && ev[w2].loc == ev[w].loc && sbt.has(f2, w2) && mo(w2, w)) {
                        return fail("sc-fence-fence-write", x, {w, f, f2, w2});
                    }
                }
            }
            for (int w2 : x.sc) {
                if (sc_write_at(w2, ev[w].loc) && sc(f, w2) && mo(w2, w)) {
                    return fail("sc-fence-write", x, {w, f, w2});
                }
            }
        }
    }
    for (int f : fences) {
        for (int w : x.sc) {
            if (!ev[w].writes() || !sc(w, f)) continue;
            for (int w2 = 0; w2 < n; ++w2) {
                if (w2 != w && ev[w2].writes() && ev[w2].loc == ev[w].loc && sbt.has(f, w2) && mo(w2, w)) {
                    return fail("sc-write-fence", x, {w, f, w2});
                }
            }
        }
    }

    Rel all = hb;
    for (size_t i = 0; i + 1 < x.sc.size(); ++i) all.add(x.sc[i], x.sc[i + 1]);
    for (int r = 0; r < n; ++r) {
        if (ev[r].reads()) all.add(rf(r), r);
    }
    all.close();
    if (all.cyclic()) {
        for (int a = 0; a < n; ++a) {
            if (all.has(a, a)) return fail("hb-sc-rf-cycle", x, {a});
        }
    }
    return {};
}

std::string outcome_string(const Program& p, const std::vector<Value>& outcome) {
    std::string out;
    for (size_t i = 0; i < outcome.size() && i < p.observed_cells.size(); ++i) {
        if (i) out += " ";
        out += p.cell_names[p.observed_cells[i]] + "=" + std::to_string(outcome[i]);
    }
    return out;
}

std::string canonical_key(const Execution& x) {
    std::ostringstream os;
    os << "out[";
    for (size_t i = 0; i < x.outcome.size(); ++i) os << (i ? "," : "") << x.outcome[i];
    os << "] rf[";
    std::vector<std::string> pairs;
    for (size_t r = 0; r < x.events.size(); ++r) {
        if (x.rf[r] >= 0) pairs.push_back(x.events[r].name + "<" + x.events[x.rf[r]].name);
    }
    std::sort(pairs.begin(), pairs.end());
    for (size_t i = 0; i < pairs.size(); ++i) os << (i ? "," : "") << pairs[i];
    os << "] mo[";
    for (size_t l = 0; l < x.mo.size(); ++l) {
        if (l) os << "|";
        for (size_t i = 0; i < x.mo[l].size(); ++i) os << (i ? ">" : "") << x.events[x.mo[l][i]].name;
    }
    os << "] sc[";
    for (size_t i = 0; i < x.sc.size(); ++i) os << (i ? ">" : "") << x.events[x.sc[i]].name;
    os << "]";
    return os.str();
}

std::string describe(const Program& p, const Execution& x) {
    std::ostringstream os;
    os << "#wmm-execution 1\n";
    for (size_t i = 0; i < x.events.size(); ++i) {
        const OEvent& e = x.events[i];
        os << "X " << e.name << " " << to_string(e.kind) << " ";
        bool mem = is_memory_access(e.kind);
        os << (mem ? p.atomic_names.at(e.loc) : "-") << " ";
        os << (e.kind == EventKind::Fence || (mem && e.kind != EventKind::Init) ? std::string(to_string(e.mo)) : "-");
        os << " " << (e.writes() ? std::to_string(e.wval) : "-");
        os << " " << (e.reads() ? x.events[x.rf[i]].name : "-") << "\n";
    }
    for (size_t l = 0; l < x.mo.size(); ++l) {
        os << "MO " << p.atomic_names.at(l);
        for (int e : x.mo[l]) os << " " << x.events[e].name;
        os << "\n";
    }
    os << "SC";
    for (int e : x.sc) os << " " << x.events[e].name;
    os << "\nOUTCOME " << outcome_string(p, x.outcome) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Enumeration by an independent interpreter

namespace {

struct OFrame {
    const std::vector<Stmt>* stmts;
    size_t pc;
};

struct OThread {
    std::string key;
    std::vector<OFrame> stack;
    int nevents = 0;
    int first_event = -1;
    int last_event = -1;
    int fork_event = -1;
};

struct RawEvent {
    int thread = -1;
    int index = 0;
    EventKind kind = EventKind::Init;
    LocId loc = 0;
    MemOrder mo = MemOrder::Relaxed;
    Value wval = 0;
    Value rval = 0;
    int rf = -1;
};

struct OState {
    std::vector<OThread> threads;
    std::vector<Value> cells;
    std::vector<RawEvent> evs;
    std::vector<std::pair<int, int>> asw;
    int atomic_events = 0;
};

bool visible(StmtKind k) {
    return k == StmtKind::Load || k == StmtKind::Store || k == StmtKind::Rmw || k == StmtKind::Fence ||
           k == StmtKind::Fork || k == StmtKind::Join;
}

const Stmt* next_stmt(const OThread& t) {
    return t.stack.empty() ? nullptr : &(*t.stack.back().stmts)[t.stack.back().pc];
}

void step_over(OThread& t) {
    ++t.stack.back().pc;
    while (!t.stack.empty() && t.stack.back().pc >= t.stack.back().stmts->size()) t.stack.pop_back();
}

void enter(OThread& t, const std::vector<Stmt>& body) {
    if (!body.empty()) t.stack.push_back({&body, 0});
}

Value evaluate(const Expr& e, const std::vector<Value>& cells) {
    switch (e.kind) {
    case Expr::Kind::Literal: return e.literal;
    case Expr::Kind::Var: return cells[e.cell];
    case Expr::Kind::Binary: return apply(e.op, evaluate(*e.lhs, cells), evaluate(*e.rhs, cells));
    }
    return 0;
}

class Enumerator {
public:
    Enumerator(const Program& p, int bound) : p_(p), bound_(bound) {}

    Enumeration run() {
        if (!p_.aliases.empty()) throw Unsupported("the oracle does not model mixed-access aliases");
        if (count_atomic_statements(p_) > bound_) {
            throw BudgetExceeded("program has " + std::to_string(count_atomic_statements(p_)) +
                                 " atomic statements, over the bound of " + std::to_string(bound_));
        }
        OState s;
        s.cells.assign(p_.cell_names.size(), 0);
        for (LocId l = 0; l < p_.atomic_names.size(); ++l) {
            RawEvent e;
            e.loc = l;
            s.evs.push_back(e);
        }
        OThread main;
        main.key = "main";
        enter(main, p_.stmts);
        s.threads.push_back(main);
        settle(s);
        explore(s);
        for (auto& [key, x] : found_) {
            out_.keys.insert(key);
            out_.outcomes.insert(x.outcome);
            out_.executions.push_back(std::move(x));
        }
        return std::move(out_);
    }

private:
    const Program& p_;
    int bound_;
    Enumeration out_;
    std::set<std::string> skeletons_;
    std::map<std::string, Execution> found_;

    int add_event(OState& s, int t, RawEvent e) {
        OThread& th = s.threads[t];
        e.thread = t;
        e.index = th.nevents++;
        int id = static_cast<int>(s.evs.size());
        s.evs.push_back(e);
        if (th.first_event < 0) th.first_event = id;
        th.last_event = id;
        return id;
    }

    void run_invisible(OState& s, int t) {
        while (const Stmt* st = next_stmt(s.threads[t])) {
            if (visible(st->kind)) return;
            OThread& th = s.threads[t];
            switch (st->kind) {
            case StmtKind::AssignNA:
                s.cells[st->cell] = evaluate(*st->expr, s.cells);
                step_over(th);
                break;
            case StmtKind::If: {
                bool taken = s.cells[st->cell] != 0;
                step_over(th);
                enter(th, taken ? st->body : st->else_body);
                break;
            }
            default: step_over(th); break;
            }
        }
    }

    /// Runs everything that cannot branch: non-atomic statements, forks, and
    /// joins whose child is done.
    void settle(OState& s) {
        bool progress = true;
        while (progress) {
            progress = false;
            for (size_t t = 0; t < s.threads.size(); ++t) {
                run_invisible(s, static_cast<int>(t));
                const Stmt* st = next_stmt(s.threads[t]);
                if (!st) continue;
                if (st->kind == StmtKind::Fork) {
                    RawEvent e;
                    e.kind = EventKind::Fork;
                    int fe = add_event(s, static_cast<int>(t), e);
                    OThread child;
                    child.key = "f" + std::to_string(st->id);
                    child.fork_event = fe;
                    enter(child, st->body);
                    int ct = static_cast<int>(s.threads.size());
                    s.cells[st->cell] = ct + 1;  // handles hold the engine's tid numbering
                    step_over(s.threads[t]);
                    s.threads.push_back(child);
                    run_invisible(s, ct);
                    progress = true;
                } else if (st->kind == StmtKind::Join) {
                    Value h = s.cells[st->cell];
                    int ct = static_cast<int>(h) - 1;
                    if (h <= 1 || ct >= static_cast<int>(s.threads.size())) {
                        throw ProgramError("Join(" + st->var + ") on a handle that no executed Fork assigned");
                    }
                    if (next_stmt(s.threads[ct])) continue;
                    RawEvent e;
                    e.kind = EventKind::Join;
                    int je = add_event(s, static_cast<int>(t), e);
                    const OThread& c = s.threads[ct];
                    s.asw.emplace_back(c.last_event >= 0 ? c.last_event : c.fork_event, je);
                    step_over(s.threads[t]);
                    progress = true;
                }
            }
        }
    }

    void explore(OState& s) {
        bool any = false;
        for (size_t t = 0; t < s.threads.size(); ++t) {
            const Stmt* st = next_stmt(s.threads[t]);
            if (!st || st->kind == StmtKind::Fork || st->kind == StmtKind::Join) continue;
            any = true;
            const int ti = static_cast<int>(t);
            if (s.atomic_events + 1 > bound_) throw BudgetExceeded("run exceeds the atomic event bound");
            switch (st->kind) {
            case StmtKind::Store:
            case StmtKind::Fence: {
                OState n = s;
                RawEvent e;
                e.kind = st->kind == StmtKind::Store ? EventKind::Store : EventKind::Fence;
                e.mo = st->mo;
                if (st->kind == StmtKind::Store) {
                    e.loc = st->loc_id;
                    e.wval = evaluate(*st->expr, n.cells);
                }
                add_event(n, ti, e);
                finish_step(n, ti);
                break;
            }
            case StmtKind::Load:
            case StmtKind::Rmw: {
                for (size_t w = 0; w < s.evs.size(); ++w) {
                    const RawEvent& we = s.evs[w];
                    if (!is_write(we.kind) || we.loc != st->loc_id) continue;
                    OState n = s;
                    RawEvent e;
                    e.kind = st->kind == StmtKind::Load ? EventKind::Load : EventKind::Rmw;
                    e.loc = st->loc_id;
                    e.mo = st->mo;
                    e.rval = we.wval;
                    e.rf = static_cast<int>(w);
                    if (st->kind == StmtKind::Rmw) {
                        Value operand = evaluate(*st->expr, n.cells);
                        e.wval = st->rmw == RmwOp::FetchAdd ? apply(BinOp::Add, e.rval, operand) : operand;
                    }
                    add_event(n, ti, e);
                    if (st->has_var) n.cells[st->cell] = e.rval;
                    finish_step(n, ti);
                }
                break;
            }
            default: break;
            }
        }
        if (!any) complete(s);
    }

    void finish_step(OState& n, int t) {
        ++n.atomic_events;
        step_over(n.threads[t]);
        settle(n);
        explore(n);
    }

    void complete(const OState& s) {
        Execution x;
        const int n = static_cast<int>(s.evs.size());
        x.rf.assign(n, -1);
        x.mo.resize(p_.atomic_names.size());
        for (int i = 0; i < n; ++i) {
            const RawEvent& r = s.evs[i];
            OEvent e;
            e.kind = r.kind;
            e.loc = r.loc;
            e.mo = r.mo;
            e.wval = r.wval;
            e.rval = r.rval;
            e.thread = r.thread;
            e.name = r.kind == EventKind::Init ? "init:" + p_.atomic_names[r.loc]
                                               : s.threads[r.thread].key + "." + std::to_string(r.index);
            x.events.push_back(e);
            x.rf[i] = r.rf;
            if (e.sc()) x.sc.push_back(i);
        }
        std::vector<int> last(s.threads.size(), -1);
        for (int i = 0; i < n; ++i) {
            int t = s.evs[i].thread;
            if (t < 0) continue;
            if (last[t] >= 0) x.sb.emplace_back(last[t], i);
            last[t] = i;
        }
        x.asw = s.asw;
        for (const auto& th : s.threads) {
            if (th.fork_event >= 0 && th.first_event >= 0) x.asw.emplace_back(th.fork_event, th.first_event);
        }
        for (CellId c : p_.observed_cells) x.outcome.push_back(s.cells[c]);

        // Interleavings that differ only in the order of unrelated events
        // collapse to the same skeleton.
        Execution skel = x;
        if (!skeletons_.insert(canonical_key(skel) + sb_key(x)).second) return;

        std::vector<std::vector<int>> writes(p_.atomic_names.size());
        for (int i = 0; i < n; ++i) {
            if (x.events[i].writes() && x.events[i].kind != EventKind::Init) writes[x.events[i].loc].push_back(i);
        }
        for (auto& w : writes) std::sort(w.begin(), w.end());
        choose_mo(x, writes, 0);
    }

    static std::string sb_key(const Execution& x) {
        std::string k;
        for (const auto& e : x.events) k += e.name + ":" + std::string(to_string(e.kind)) + std::to_string(e.wval) + ";";
        return k;
    }

    void choose_mo(Execution& x, std::vector<std::vector<int>>& writes, size_t loc) {
        if (loc == writes.size()) {
            ++out_.candidates;
            if (check_consistent(x).ok) found_.try_emplace(canonical_key(x), x);
            return;
        }
        std::vector<int> perm = writes[loc];
        do {
            x.mo[loc].clear();
            x.mo[loc].push_back(static_cast<int>(loc));  // init stores occupy the first slots
            x.mo[loc].insert(x.mo[loc].end(), perm.begin(), perm.end());
            choose_mo(x, writes, loc + 1);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
};

}  // namespace

Enumeration enumerate_consistent(const Program& p, int bound) { return Enumerator(p, bound).run(); }

}  // namespace wmm::oracle
