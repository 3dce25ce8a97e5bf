#include "wmm/explorer.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "wmm/race.hpp"
#include "wmm/rf_select.hpp"

namespace wmm {

namespace {

bool is_visible(StmtKind k) {
    switch (k) {
    case StmtKind::Load:
    case StmtKind::Store:
    case StmtKind::Rmw:
    case StmtKind::Fence:
    case StmtKind::Fork:
    case StmtKind::Join: return true;
    default: return false;
    }
}

bool is_batchable_store(const Stmt* s) {
    return s && s->kind == StmtKind::Store && (s->mo == MemOrder::Relaxed || s->mo == MemOrder::Release);
}

// Pseudo-threads that own promoted non-atomic writes start here, above every
// tid the shadow word can encode.
constexpr Tid kFirstPseudoTid = 64;

class Engine {
public:
    Engine(const Program& p, Plugin& plugin, const ExploreConfig& cfg)
        : p_(p), plugin_(plugin), cfg_(cfg), races_(p.cell_names.size()), shared_(shared_cells(p)) {
        st_.prog = &p;
        st_.alocs.resize(p.atomic_names.size());
        st_.cells.assign(p.cell_names.size(), 0);
        alias_cell_.assign(p.atomic_names.size(), std::nullopt);
        for (const auto& a : p.aliases) alias_cell_[*p.find_loc(a.loc)] = *p.find_cell(a.cell);
        na_write_.resize(p.cell_names.size());
        promoted_.assign(p.cell_names.size(), false);
    }

    Trace run() {
        ThreadState init;
        init.status = ThreadStatus::Finished;
        st_.threads.push_back(init);
        st_.thread_info.push_back(ThreadInfo{});

        for (LocId loc = 0; loc < p_.atomic_names.size(); ++loc) {
            Event e;
            e.kind = EventKind::Init;
            e.tid = kInitThread;
            e.loc = loc;
            Seq s = st_.commit(e, EventMeta{ClockVector::bottom(kInitThread, st_.seq + 1), {}});
            st_.mo.get_node(s, kInitThread, loc);
            st_.alocs[loc].by_thread[kInitThread].push_back(s);
        }

        ThreadState main;
        main.hb.tid = kMainThread;
        main.hb.C.set(kInitThread, st_.seq);
        main.stack.push_back({&p_.stmts, 0});
        st_.threads.push_back(main);
        st_.thread_info.push_back(ThreadInfo{kMainThread, 0, -1, kNoSeq});
        settle(kMainThread);

        while (true) {
            std::vector<Tid> en = enabled();
            if (en.empty()) {
                trace_.deadlock = std::any_of(st_.threads.begin(), st_.threads.end(),
                                              [](const ThreadState& t) { return t.status == ThreadStatus::Running; });
                break;
            }
            Tid t = en[pick(plugin_.select_thread(en), en.size())];
            const Stmt* done = step(t);
            while (plugin_.batching() && is_batchable_store(done) && is_batchable_store(thread(t).next())) {
                done = step(t);
            }
            trace_.prune += maybe_prune(st_, cfg_.prune);
        }

        trace_.events = st_.events;
        trace_.threads = st_.thread_info;
        trace_.final_cells = st_.cells;
        trace_.mo_edges = st_.mo.requested_edges();
        trace_.rmw_edges = st_.mo.rmw_edges();
        return std::move(trace_);
    }

private:
    const Program& p_;
    Plugin& plugin_;
    const ExploreConfig& cfg_;
    ExecState st_;
    RaceDetector races_;
    std::vector<bool> shared_;
    Trace trace_;

    struct NaWrite {
        bool valid = false;
        Tid tid = 0;
        ClockVector C;
        int stmt = -1;
    };
    std::vector<std::optional<CellId>> alias_cell_;  // by LocId
    std::vector<NaWrite> na_write_;                  // by CellId, aliased cells only
    std::vector<bool> promoted_;
    Tid next_pseudo_ = kFirstPseudoTid;

    static size_t pick(size_t idx, size_t n) {
        if (idx >= n) throw InvariantError("plugin chose index " + std::to_string(idx) + " of " + std::to_string(n));
        return idx;
    }

    ThreadState& thread(Tid t) { return st_.threads[t]; }

    // --- control flow -----------------------------------------------------

    void advance_pc(Tid t) {
        auto& stack = thread(t).stack;
        ++stack.back().pc;
        while (!stack.empty() && stack.back().pc >= stack.back().stmts->size()) stack.pop_back();
    }

    void push_block(Tid t, const std::vector<Stmt>& body) {
        if (!body.empty()) thread(t).stack.push_back({&body, 0});
    }

    /// Runs invisible statements until the thread reaches an atomic or
    /// threading operation, or finishes.
    void settle(Tid t) {
        while (true) {
            const Stmt* s = thread(t).next();
            if (!s) {
                thread(t).status = ThreadStatus::Finished;
                return;
            }
            if (is_visible(s->kind)) return;
            switch (s->kind) {
            case StmtKind::AssignNA: {
                Value v = eval(*s->expr, t, s->id);
                write_cell(s->cell, v, t, s->id);
                advance_pc(t);
                break;
            }
            case StmtKind::If: {
                bool taken = read_cell(s->cell, t, s->id) != 0;
                advance_pc(t);
                push_block(t, taken ? s->body : s->else_body);
                break;
            }
            case StmtKind::Assert: {
                if (eval(*s->expr, t, s->id) == 0) {
                    trace_.asserts.push_back({t, thread(t).hb.C.get(t), s->id});
                }
                advance_pc(t);
                break;
            }
            default: advance_pc(t); break;
            }
        }
    }

    Tid join_target(const Stmt& s) const {
        Value v = st_.cells[s.cell];
        if (v <= static_cast<Value>(kMainThread) || static_cast<size_t>(v) >= st_.threads.size()) {
            throw ProgramError("Join(" + s.var + ") on a handle that no executed Fork assigned (statement " +
                               std::to_string(s.pos.line) + ":" + std::to_string(s.pos.column) + ")");
        }
        return static_cast<Tid>(v);
    }

    std::vector<Tid> enabled() const {
        std::vector<Tid> out;
        for (Tid t = kMainThread; t < st_.threads.size(); ++t) {
            const ThreadState& th = st_.threads[t];
            if (th.status != ThreadStatus::Running) continue;
            const Stmt* s = th.next();
            if (s->kind == StmtKind::Join && st_.threads[join_target(*s)].status != ThreadStatus::Finished) continue;
            out.push_back(t);
        }
        return out;
    }

    // --- non-atomic memory ------------------------------------------------

    void check(CellId cell, bool is_write, Tid t, int stmt, bool atomic = false) {
        const ClockVector& C = thread(t).hb.C;
        if (cfg_.observer && !atomic) cfg_.observer(cell, is_write, t, C, stmt);
        if (auto r = races_.access(cell, is_write, t, C, stmt, atomic)) trace_.races.push_back(*r);
    }

    Value read_cell(CellId c, Tid t, int stmt) {
        if (shared_[c]) check(c, false, t, stmt);
        return st_.cells[c];
    }

    void write_cell(CellId c, Value v, Tid t, int stmt) {
        if (shared_[c]) check(c, true, t, stmt);
        st_.cells[c] = v;
        if (is_aliased(c)) {
            na_write_[c] = {true, t, thread(t).hb.C, stmt};
            promoted_[c] = false;
        }
    }

    bool is_aliased(CellId c) const {
        return std::any_of(alias_cell_.begin(), alias_cell_.end(), [&](const auto& a) { return a == c; });
    }

    Value eval(const Expr& e, Tid t, int stmt) {
        switch (e.kind) {
        case Expr::Kind::Literal: return e.literal;
        case Expr::Kind::Var: return read_cell(e.cell, t, stmt);
        case Expr::Kind::Binary: {
            Value l = eval(*e.lhs, t, stmt);
            Value r = eval(*e.rhs, t, stmt);
            return apply(e.op, l, r);
        }
        }
        return 0;
    }

    /// An atomic access to a location whose aliased cell was last written
    /// non-atomically first moves that write into the location's history.
    void promote_if_needed(LocId loc) {
        auto c = alias_cell_[loc];
        if (!c || !na_write_[*c].valid || promoted_[*c] || races_.atomic_written(*c)) return;
        const NaWrite& w = na_write_[*c];
        Tid pseudo = next_pseudo_++;
        PendingAccess pa{st_.seq + 1, pseudo, loc, MemOrder::Relaxed, false, &w.C};
        auto prior = write_prior_set(st_, pa);
        Event e;
        e.tid = pseudo;
        e.kind = EventKind::Store;
        e.loc = loc;
        e.value = st_.cells[*c];
        e.stmt = w.stmt;
        e.promoted = true;
        e.hb_tid = w.tid;
        e.hb_clock = w.C.get(w.tid) + 1;
        Seq s = st_.commit(e, EventMeta{w.C, {}});
        st_.mo.get_node(s, pseudo, loc);
        st_.mo.add_edges(prior, s);
        st_.alocs[loc].by_thread[pseudo].push_back(s);
        promoted_[*c] = true;
        after_commit();
    }

    void after_commit() {
        if (cfg_.check_acyclic && st_.mo.has_cycle()) {
            throw InvariantError("mo-graph cycle after committing event " + std::to_string(st_.seq));
        }
    }

    // --- atomic and threading operations ----------------------------------

    const Stmt* step(Tid t) {
        const Stmt* s = thread(t).next();
        switch (s->kind) {
        case StmtKind::Fork: do_fork(t, *s); break;
        case StmtKind::Join: do_join(t, *s); break;
        case StmtKind::Fence: do_fence(t, *s); break;
        case StmtKind::Store: do_store(t, *s); break;
        case StmtKind::Load: do_read(t, *s); break;
        case StmtKind::Rmw: do_read(t, *s); break;
        default: throw InvariantError("scheduled an invisible statement");
        }
        return s;
    }

    Seq begin_event(Tid t) {
        Seq s = st_.seq + 1;
        advance(thread(t).hb, s);
        return s;
    }

    void do_fork(Tid t, const Stmt& s) {
        begin_event(t);
        Tid child = static_cast<Tid>(st_.threads.size());
        Event e;
        e.tid = t;
        e.kind = EventKind::Fork;
        e.stmt = s.id;
        e.child = child;
        Seq seq = st_.commit(e, EventMeta{thread(t).hb.C, {}});

        ThreadState th;
        th.hb = on_fork(thread(t).hb, child, seq);
        push_block_for(th, s.body);
        st_.threads.push_back(std::move(th));
        st_.thread_info.push_back(ThreadInfo{child, t, s.id, seq});
        st_.cells[s.cell] = child;

        advance_pc(t);
        settle(child);
        settle(t);
    }

    static void push_block_for(ThreadState& th, const std::vector<Stmt>& body) {
        if (!body.empty()) th.stack.push_back({&body, 0});
    }

    void do_join(Tid t, const Stmt& s) {
        Tid child = join_target(s);
        Seq seq = begin_event(t);
        on_join(thread(t).hb, thread(child).hb, seq);
        Event e;
        e.tid = t;
        e.kind = EventKind::Join;
        e.stmt = s.id;
        e.child = child;
        st_.commit(e, EventMeta{thread(t).hb.C, {}});
        advance_pc(t);
        settle(t);
    }

    void do_fence(Tid t, const Stmt& s) {
        begin_event(t);
        on_fence(thread(t).hb, s.mo);
        Event e;
        e.tid = t;
        e.kind = EventKind::Fence;
        e.mo = s.mo;
        e.stmt = s.id;
        Seq seq = st_.commit(e, EventMeta{thread(t).hb.C, {}});
        st_.fences[t].push_back(seq);
        if (s.mo == MemOrder::SeqCst) st_.sc_fences[t].push_back(seq);
        advance_pc(t);
        settle(t);
    }

    void do_store(Tid t, const Stmt& s) {
        Value v = eval(*s.expr, t, s.id);
        promote_if_needed(s.loc_id);
        Seq seq = begin_event(t);
        ThreadHB& hb = thread(t).hb;
        PendingAccess pa{seq, t, s.loc_id, s.mo, false, &hb.C};
        auto prior = write_prior_set(st_, pa);
        StoreHB rf = on_store(hb, seq, s.mo);

        Event e;
        e.tid = t;
        e.kind = EventKind::Store;
        e.loc = s.loc_id;
        e.mo = s.mo;
        e.value = v;
        e.stmt = s.id;
        st_.commit(e, EventMeta{hb.C, rf.RF});
        st_.mo.get_node(seq, t, s.loc_id);
        st_.mo.add_edges(prior, seq);
        st_.alocs[s.loc_id].by_thread[t].push_back(seq);
        after_commit();

        if (auto c = alias_cell_[s.loc_id]) {
            check(*c, true, t, s.id, true);
            st_.cells[*c] = v;
        }
        advance_pc(t);
        settle(t);
    }

    struct Candidate {
        Seq store;
        std::vector<Seq> prior;
    };

    /// An RMW also has to be able to place its own store right after the
    /// one it reads: nothing its write prior set names may lie mo-after it.
    bool rmw_store_fits(const PendingAccess& pa, Seq src) const {
        ClockVector C = *pa.C;
        if (is_acquire(pa.mo)) C.merge(st_.info(src).rf_cv);
        PendingAccess after = pa;
        after.C = &C;
        for (Seq e : write_prior_set(st_, after, src)) {
            if (st_.mo.reachable(src, e)) return false;
        }
        return true;
    }

    void do_read(Tid t, const Stmt& s) {
        const bool is_rmw = s.kind == StmtKind::Rmw;
        Value operand = is_rmw ? eval(*s.expr, t, s.id) : 0;
        promote_if_needed(s.loc_id);
        Seq seq = begin_event(t);
        ThreadHB& hb = thread(t).hb;
        PendingAccess pa{seq, t, s.loc_id, s.mo, is_rmw, &hb.C};

        std::vector<Candidate> feasible;
        for (Seq c : build_may_read_from(st_, pa)) {
            ReadPrior rp = read_prior_set(st_, pa, c);
            if (!rp.accept) continue;
            if (is_rmw && !rmw_store_fits(pa, c)) continue;
            feasible.push_back({c, std::move(rp.set)});
        }
        if (feasible.empty()) {
            throw InvariantError("no feasible store for " + std::string(to_string(s.kind == StmtKind::Rmw
                                                                                   ? EventKind::Rmw
                                                                                   : EventKind::Load)) +
                                 " at seq " + std::to_string(seq));
        }
        std::vector<Seq> offered;
        for (const auto& f : feasible) offered.push_back(f.store);
        const Candidate& pick_c = feasible[pick(plugin_.select_store(offered), offered.size())];
        const Seq src = pick_c.store;

        st_.mo.add_edges(pick_c.prior, src);
        const Value loaded = st_.ev(src).value;
        StoreHB src_hb{src, st_.info(src).rf_cv};

        Event e;
        e.tid = t;
        e.loc = s.loc_id;
        e.mo = s.mo;
        e.rf = src;
        e.stmt = s.id;
        if (!is_rmw) {
            on_load(hb, s.mo, src_hb);
            e.kind = EventKind::Load;
            e.value = loaded;
            st_.commit(e, EventMeta{hb.C, {}});
        } else {
            StoreHB out = on_rmw(hb, seq, s.mo, src_hb);
            e.kind = EventKind::Rmw;
            e.read_value = loaded;
            e.value = s.rmw == RmwOp::FetchAdd ? apply(BinOp::Add, loaded, operand) : operand;
            st_.commit(e, EventMeta{hb.C, out.RF});
            st_.info(src).read_by_rmw = true;
            st_.mo.get_node(seq, t, s.loc_id);
            st_.mo.add_rmw_edge(src, seq);
            st_.mo.add_edges(write_prior_set(st_, pa, src), seq);
        }
        st_.alocs[s.loc_id].by_thread[t].push_back(seq);
        after_commit();

        if (s.has_var) st_.cells[s.cell] = loaded;
        if (auto c = alias_cell_[s.loc_id]) {
            check(*c, is_rmw, t, s.id, true);
            if (is_rmw) st_.cells[*c] = e.value;
        }
        advance_pc(t);
        settle(t);
    }
};

void collect_cells(const std::vector<Stmt>& stmts, int thread, int& next_thread,
                   std::vector<std::set<int>>& users) {
    auto expr_cells = [&](auto&& self, const ExprPtr& e) -> void {
        if (!e) return;
        if (e->kind == Expr::Kind::Var) users[e->cell].insert(thread);
        self(self, e->lhs);
        self(self, e->rhs);
    };
    for (const auto& s : stmts) {
        if (s.has_var) users[s.cell].insert(thread);
        expr_cells(expr_cells, s.expr);
        if (s.kind == StmtKind::Fork) {
            int child = next_thread++;
            collect_cells(s.body, child, next_thread, users);
        } else {
            collect_cells(s.body, thread, next_thread, users);
            collect_cells(s.else_body, thread, next_thread, users);
        }
    }
}

}  // namespace

std::vector<bool> shared_cells(const Program& p) {
    std::vector<std::set<int>> users(p.cell_names.size());
    int next_thread = 1;
    collect_cells(p.stmts, 0, next_thread, users);
    std::vector<bool> out(users.size());
    for (size_t i = 0; i < users.size(); ++i) out[i] = users[i].size() > 1;
    return out;
}

void ExhaustivePlugin::begin_run(std::uint64_t) { depth_ = 0; }

size_t ExhaustivePlugin::choose(size_t arity) {
    if (depth_ < path_.size()) {
        if (path_[depth_].arity != arity) throw InvariantError("exhaustive replay diverged");
        return path_[depth_++].index;
    }
    path_.push_back({0, arity});
    ++depth_;
    ++nodes_;
    return 0;
}

void ExhaustivePlugin::end_run(const Trace&) {
    ++runs_;
    path_.resize(depth_);
    while (!path_.empty() && path_.back().index + 1 >= path_.back().arity) path_.pop_back();
    if (path_.empty()) {
        done_ = true;
    } else {
        ++path_.back().index;
    }
    if (!done_ && nodes_ >= budget_) {
        over_budget_ = true;
        done_ = true;
    }
}

Trace explore(const Program& p, Plugin& plugin, std::uint64_t seed, const ExploreConfig& cfg) {
    plugin.begin_run(seed);
    Trace t = Engine(p, plugin, cfg).run();
    plugin.end_run(t);
    return t;
}

std::vector<Value> outcome_of(const Program& p, const Trace& t) {
    std::vector<Value> out;
    out.reserve(p.observed_cells.size());
    for (CellId c : p.observed_cells) out.push_back(t.final_cells.at(c));
    return out;
}

Summary run_many(const Program& p, Plugin& plugin, std::uint64_t first_seed, std::uint64_t count,
                 const ExploreConfig& cfg, bool keep_traces) {
    Summary sum;
    auto* exhaustive = dynamic_cast<ExhaustivePlugin*>(&plugin);
    std::set<std::tuple<RaceKind, int, int>> seen_races;
    std::set<int> seen_asserts;
    for (std::uint64_t i = 0; i < count; ++i) {
        if (exhaustive && exhaustive->done()) break;
        Trace t = explore(p, plugin, first_seed + i, cfg);
        ++sum.runs;
        ++sum.outcomes[outcome_of(p, t)];
        if (!t.races.empty()) ++sum.race_runs;
        if (!t.asserts.empty()) ++sum.assert_runs;
        if (t.deadlock) ++sum.deadlock_runs;
        for (const auto& r : t.races) {
            if (seen_races.insert({r.kind, r.first.stmt, r.second.stmt}).second) sum.races.push_back(r);
        }
        for (const auto& a : t.asserts) {
            if (seen_asserts.insert(a.stmt).second) sum.asserts.push_back(a);
        }
        sum.prune += t.prune;
        if (keep_traces) sum.traces.push_back(std::move(t));
    }
    return sum;
}

}  // namespace wmm
