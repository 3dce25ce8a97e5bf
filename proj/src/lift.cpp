#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "wmm/oracle.hpp"

namespace wmm::oracle {

namespace {

// Writes of one location, grouped into blocks that must stay adjacent
// because each RMW sits immediately after the store it read.
struct LocOrders {
    std::vector<std::vector<int>> orders;
};

LocOrders extensions(const std::vector<int>& writes, const std::vector<std::pair<int, int>>& before,
                     const std::map<int, int>& rmw_next, size_t cap) {
    // Chain heads are writes no RMW edge points to.
    std::map<int, int> block_of;
    std::vector<std::vector<int>> blocks;
    std::set<int> is_target;
    for (auto [a, b] : rmw_next) is_target.insert(b);
    for (int w : writes) {
        if (is_target.count(w)) continue;
        std::vector<int> chain{w};
        for (auto it = rmw_next.find(w); it != rmw_next.end(); it = rmw_next.find(it->second)) chain.push_back(it->second);
        for (int c : chain) block_of[c] = static_cast<int>(blocks.size());
        blocks.push_back(chain);
    }
    LocOrders out;
    if (block_of.size() != writes.size()) return out;  // a cycle through RMW edges: nothing is consistent

    const size_t nb = blocks.size();
    std::vector<std::vector<bool>> pred(nb, std::vector<bool>(nb, false));
    for (auto [a, b] : before) {
        int ba = block_of.at(a), bb = block_of.at(b);
        if (ba == bb) {
            const auto& ch = blocks[ba];
            if (std::find(ch.begin(), ch.end(), a) > std::find(ch.begin(), ch.end(), b)) return out;
            continue;
        }
        pred[bb][ba] = true;
    }

    std::vector<bool> placed(nb, false);
    std::vector<int> order;
    std::function<void()> rec = [&]() {
        if (order.size() == nb) {
            std::vector<int> flat;
            for (int b : order) flat.insert(flat.end(), blocks[b].begin(), blocks[b].end());
            out.orders.push_back(std::move(flat));
            if (out.orders.size() > cap) throw ExtensionBudgetExceeded("too many mo extensions");
            return;
        }
        for (size_t b = 0; b < nb; ++b) {
            if (placed[b]) continue;
            bool ready = true;
            for (size_t a = 0; a < nb && ready; ++a) ready = !(pred[b][a] && !placed[a]);
            if (!ready) continue;
            placed[b] = true;
            order.push_back(static_cast<int>(b));
            rec();
            order.pop_back();
            placed[b] = false;
        }
    };
    rec();
    return out;
}

}  // namespace

std::vector<Execution> lift_trace(const Program& p, const Trace& t, size_t cap) {
    if (!p.aliases.empty()) throw Unsupported("the oracle does not model mixed-access aliases");
    for (const auto& e : t.events) {
        if (e.promoted) throw Unsupported("trace contains promoted non-atomic writes");
    }

    const int n = static_cast<int>(t.events.size());
    auto idx = [](Seq s) { return static_cast<int>(s - 1); };

    Execution base;
    base.rf.assign(n, -1);
    base.mo.resize(p.atomic_names.size());
    std::map<Tid, int> counter, last, first;
    for (int i = 0; i < n; ++i) {
        const Event& e = t.events[i];
        OEvent o;
        o.kind = e.kind;
        o.loc = e.loc;
        o.mo = e.mo;
        if (e.kind == EventKind::Init) {
            o.name = "init:" + p.atomic_names.at(e.loc);
        } else {
            const ThreadInfo& ti = t.threads.at(e.tid);
            std::string key = e.tid == kMainThread ? "main" : "f" + std::to_string(ti.fork_stmt);
            o.name = key + "." + std::to_string(counter[e.tid]++);
            o.thread = static_cast<int>(e.tid);
            if (auto it = last.find(e.tid); it != last.end()) base.sb.emplace_back(it->second, i);
            last[e.tid] = i;
            first.try_emplace(e.tid, i);
        }
        if (e.kind == EventKind::Rmw) {
            o.rval = e.read_value;
            o.wval = e.value;
        } else if (e.kind == EventKind::Load) {
            o.rval = e.value;
        } else if (is_write(e.kind)) {
            o.wval = e.value;
        }
        if (is_read(e.kind)) base.rf[i] = idx(e.rf);
        if (o.sc()) base.sc.push_back(i);
        base.events.push_back(o);
    }
    for (int i = 0; i < n; ++i) {
        const Event& e = t.events[i];
        if (e.kind == EventKind::Fork) {
            if (auto it = first.find(e.child); it != first.end()) base.asw.emplace_back(i, it->second);
        } else if (e.kind == EventKind::Join) {
            auto it = last.find(e.child);
            int from = it != last.end() ? it->second : idx(t.threads.at(e.child).fork_seq);
            base.asw.emplace_back(from, i);
        }
    }
    for (CellId c : p.observed_cells) base.outcome.push_back(t.final_cells.at(c));

    std::vector<std::vector<int>> writes(p.atomic_names.size());
    std::vector<std::vector<std::pair<int, int>>> before(p.atomic_names.size());
    std::vector<std::map<int, int>> rmw_next(p.atomic_names.size());
    std::vector<int> init_of(p.atomic_names.size(), -1);
    for (int i = 0; i < n; ++i) {
        const Event& e = t.events[i];
        if (e.kind == EventKind::Init) init_of[e.loc] = i;
        else if (is_write(e.kind)) writes[e.loc].push_back(i);
    }
    for (auto [a, b] : t.mo_edges) {
        const Event& ea = t.at(a);
        if (ea.kind == EventKind::Init) continue;  // init is placed first anyway
        before[ea.loc].emplace_back(idx(a), idx(b));
    }
    for (auto [a, b] : t.rmw_edges) {
        const Event& ea = t.at(a);
        if (ea.kind == EventKind::Init) {
            // An RMW reading init must come first.
            for (int w : writes[ea.loc]) {
                if (w != idx(b)) before[ea.loc].emplace_back(idx(b), w);
            }
            continue;
        }
        rmw_next[ea.loc][idx(a)] = idx(b);
    }
    // Stores removed by an earlier prune pass were behind the frontier, so
    // they precede every store that survived that pass.
    for (size_t l = 0; l < writes.size(); ++l) {
        for (int z : writes[l]) {
            int zp = t.events[z].pruned_pass;
            if (zp == 0) continue;
            for (int w : writes[l]) {
                int wp = t.events[w].pruned_pass;
                if (w != z && (wp == 0 || wp > zp)) before[l].emplace_back(z, w);
            }
        }
    }

    std::vector<LocOrders> per_loc;
    size_t product = 1;
    for (size_t l = 0; l < writes.size(); ++l) {
        per_loc.push_back(extensions(writes[l], before[l], rmw_next[l], cap));
        product *= per_loc.back().orders.size();
        if (product > cap) throw ExtensionBudgetExceeded("too many mo extensions");
    }

    std::vector<Execution> out;
    std::vector<size_t> pick(per_loc.size(), 0);
    if (product == 0) return out;
    while (true) {
        Execution x = base;
        for (size_t l = 0; l < per_loc.size(); ++l) {
            x.mo[l].push_back(init_of[l]);
            const auto& o = per_loc[l].orders[pick[l]];
            x.mo[l].insert(x.mo[l].end(), o.begin(), o.end());
        }
        out.push_back(std::move(x));
        size_t l = 0;
        while (l < pick.size() && ++pick[l] == per_loc[l].orders.size()) pick[l++] = 0;
        if (l == pick.size()) break;
    }
    return out;
}

}  // namespace wmm::oracle
