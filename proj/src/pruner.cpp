#include "wmm/pruner.hpp"

#include <algorithm>
#include <set>

namespace wmm {

std::string_view to_string(PruneMode mode) {
    switch (mode) {
    case PruneMode::Off: return "off";
    case PruneMode::Conservative: return "conservative";
    case PruneMode::Aggressive: return "aggressive";
    }
    return "?";
}

std::optional<PruneMode> parse_prune_mode(std::string_view text) {
    for (auto m : {PruneMode::Off, PruneMode::Conservative, PruneMode::Aggressive}) {
        if (to_string(m) == text) return m;
    }
    return std::nullopt;
}

ClockVector cv_min(const ExecState& st) {
    std::optional<ClockVector> out;
    for (Tid t = kMainThread; t < st.threads.size(); ++t) {
        const ThreadState& th = st.threads[t];
        if (th.status == ThreadStatus::Finished) continue;
        out = out ? intersect(*out, th.hb.C) : th.hb.C;
    }
    return out.value_or(ClockVector{});
}

namespace {

int next_pass_id(const ExecState& st) {
    int n = 0;
    for (const auto& e : st.events) n = std::max(n, e.pruned_pass);
    return n + 1;
}

void drop_from_history(ExecState& st, Seq s, int pass) {
    Event& e = st.ev(s);
    auto& list = st.alocs[e.loc].by_thread[e.tid];
    list.erase(std::remove(list.begin(), list.end(), s), list.end());
    st.info(s).live = false;
    e.pruned_pass = pass;
}

/// Removes every store mo-before one of `anchors`, plus the loads that read
/// a removed store.
void prune_behind(ExecState& st, const std::vector<Seq>& anchors, int pass, PruneStats& stats) {
    std::set<Seq> doomed;
    for (Seq a : anchors) {
        if (!st.mo.contains(a)) continue;
        for (Seq z : st.mo.nodes_at(st.ev(a).loc)) {
            if (z != a && st.mo.reachable(z, a)) doomed.insert(z);
        }
    }
    for (Seq z : doomed) {
        drop_from_history(st, z, pass);
        st.mo.remove(z);
        ++stats.stores;
    }
    if (doomed.empty()) return;
    for (auto& h : st.alocs) {
        for (auto& [_, list] : h.by_thread) {
            std::vector<Seq> gone;
            for (Seq x : list) {
                const Event& e = st.ev(x);
                if (e.kind == EventKind::Load && doomed.contains(e.rf)) gone.push_back(x);
            }
            for (Seq x : gone) {
                drop_from_history(st, x, pass);
                ++stats.loads;
            }
        }
    }
}

void prune_fences(ExecState& st, const ClockVector& frontier, int pass, PruneStats& stats) {
    for (auto& [t, list] : st.fences) {
        Seq last_sc = st.sc_fences[t].empty() ? kNoSeq : st.sc_fences[t].back();
        std::vector<Seq> keep;
        for (Seq f : list) {
            const Event& e = st.ev(f);
            const bool behind_frontier = f <= frontier.get(t);
            bool drop;
            if (e.mo == MemOrder::SeqCst) {
                drop = behind_frontier && f != last_sc;
            } else if (e.mo == MemOrder::Acquire) {
                drop = true;  // already folded into the thread clock
            } else {
                drop = behind_frontier;
            }
            if (drop) {
                st.ev(f).pruned_pass = pass;
                st.info(f).live = false;
                ++stats.fences;
            } else {
                keep.push_back(f);
            }
        }
        list = std::move(keep);
        auto& sc = st.sc_fences[t];
        sc.erase(std::remove_if(sc.begin(), sc.end(), [&](Seq f) { return !st.info(f).live; }), sc.end());
    }
}

}  // namespace

PruneStats prune_conservative(ExecState& st) {
    PruneStats stats;
    stats.passes = 1;
    const int pass = next_pass_id(st);
    const ClockVector frontier = cv_min(st);
    std::vector<Seq> anchors;
    for (const auto& h : st.alocs) {
        for (const auto& [_, list] : h.by_thread) {
            for (Seq s : list) {
                const Event& e = st.ev(s);
                if (!is_write(e.kind)) continue;
                bool behind = e.promoted ? frontier.get(e.hb_tid) >= e.hb_clock : frontier.get(e.tid) >= s;
                if (behind) anchors.push_back(s);
            }
        }
    }
    prune_behind(st, anchors, pass, stats);
    prune_fences(st, frontier, pass, stats);
    return stats;
}

PruneStats prune_aggressive(ExecState& st, Seq window) {
    PruneStats stats;
    stats.passes = 1;
    const int pass = next_pass_id(st);
    std::vector<Seq> anchors;
    for (const auto& h : st.alocs) {
        for (const auto& [_, list] : h.by_thread) {
            for (Seq s : list) {
                if (is_write(st.ev(s).kind) && s + window <= st.seq) anchors.push_back(s);
            }
        }
    }
    prune_behind(st, anchors, pass, stats);
    prune_fences(st, cv_min(st), pass, stats);
    return stats;
}

PruneStats maybe_prune(ExecState& st, const PruneConfig& cfg) {
    if (cfg.mode == PruneMode::Off || st.live_events() <= cfg.trigger) return {};
    if (cfg.mode == PruneMode::Conservative) return prune_conservative(st);
    return prune_aggressive(st, cfg.window);
}

}  // namespace wmm
