#include "wmm/rf_select.hpp"

#include <algorithm>
#include <set>

namespace wmm {

Seq ExecState::commit(Event e, EventMeta m) {
    e.seq = ++seq;
    events.push_back(e);
    meta.push_back(std::move(m));
    return e.seq;
}

size_t ExecState::live_events() const {
    size_t n = 0;
    for (const auto& h : alocs) {
        for (const auto& [_, list] : h.by_thread) n += list.size();
    }
    for (const auto& [_, list] : fences) n += list.size();
    return n;
}

bool hb_before(const ExecState& st, Seq x, const ClockVector& C) {
    const Event& e = st.ev(x);
    if (e.promoted) return C.get(e.hb_tid) >= e.hb_clock;
    return C.get(e.tid) >= e.seq;
}

namespace {

Seq last_sc_fence(const ExecState& st, Tid t) {
    auto it = st.sc_fences.find(t);
    return it == st.sc_fences.end() || it->second.empty() ? kNoSeq : it->second.back();
}

/// Latest sc fence of `t` sc-ordered before `bound`.
Seq last_fence_before(const ExecState& st, Tid t, Seq bound) {
    if (bound == kNoSeq) return kNoSeq;
    auto it = st.sc_fences.find(t);
    if (it == st.sc_fences.end()) return kNoSeq;
    Seq out = kNoSeq;
    for (Seq f : it->second) {
        if (f < bound) out = f;
    }
    return out;
}

Seq last_sc_store(const ExecState& st, LocId a) {
    Seq out = kNoSeq;
    for (const auto& [_, list] : st.alocs[a].by_thread) {
        for (Seq x : list) {
            const Event& e = st.ev(x);
            if (is_write(e.kind) && e.is_sc()) out = std::max(out, x);
        }
    }
    return out;
}

Seq get_write(const ExecState& st, Seq x) {
    if (x == kNoSeq) return kNoSeq;
    const Event& e = st.ev(x);
    return e.kind == EventKind::Load ? e.rf : x;
}

/// Last element of `list` satisfying `pred`, scanning from the back.
template <class Pred>
Seq last_where(const std::vector<Seq>& list, Pred pred) {
    for (auto it = list.rbegin(); it != list.rend(); ++it) {
        if (pred(*it)) return *it;
    }
    return kNoSeq;
}

/// The per-thread core shared by both prior-set procedures: the latest of the
/// fence-derived candidates S1..S3 and the hb-derived S4, mapped to a write.
Seq prior_for_thread(const ExecState& st, Tid t, const std::vector<Seq>& list, bool is_sc, Seq own_fence,
                     const ClockVector& C) {
    Seq f_t = last_sc_fence(st, t);
    Seq f_b = last_fence_before(st, t, own_fence);
    auto store = [&](Seq x) { return is_write(st.ev(x).kind); };

    Seq s1 = (is_sc && f_t) ? last_where(list, [&](Seq x) { return store(x) && x < f_t; }) : kNoSeq;
    Seq s2 = own_fence ? last_where(list, [&](Seq x) { return store(x) && st.ev(x).is_sc() && x < own_fence; })
                       : kNoSeq;
    Seq s3 = f_b ? last_where(list, [&](Seq x) { return store(x) && x < f_b; }) : kNoSeq;
    Seq s4 = last_where(list, [&](Seq x) { return hb_before(st, x, C); });
    return get_write(st, std::max({s1, s2, s3, s4}));
}

}  // namespace

std::vector<Seq> build_may_read_from(const ExecState& st, const PendingAccess& l) {
    const bool sc_load = l.mo == MemOrder::SeqCst;
    const Seq last_sc = sc_load ? last_sc_store(st, l.loc) : kNoSeq;

    std::vector<Seq> sc_stores;
    if (sc_load) {
        for (const auto& [_, list] : st.alocs[l.loc].by_thread) {
            for (Seq x : list) {
                if (is_write(st.ev(x).kind) && st.ev(x).is_sc()) sc_stores.push_back(x);
            }
        }
    }

    std::vector<Seq> out;
    for (const auto& [t, list] : st.alocs[l.loc].by_thread) {
        bool seen_hb = false;
        for (auto it = list.rbegin(); it != list.rend(); ++it) {
            Seq x = *it;
            if (!is_write(st.ev(x).kind)) continue;
            if (hb_before(st, x, *l.C)) {
                if (seen_hb) break;  // hidden behind a later store of the same thread
                seen_hb = true;
            }
            if (last_sc != kNoSeq && x != last_sc) {
                if (st.ev(x).is_sc() && x < last_sc) continue;
                // A store that happens before any sc store at this location is
                // mo-before it, and an sc load may not read past that store.
                bool hidden = std::any_of(sc_stores.begin(), sc_stores.end(), [&](Seq w) {
                    return w != x && hb_before(st, x, st.info(w).cv);
                });
                if (hidden) continue;
            }
            if (l.is_rmw && st.info(x).read_by_rmw) continue;
            out.push_back(x);
        }
    }
    std::sort(out.rbegin(), out.rend());
    return out;
}

std::vector<Seq> write_prior_set(const ExecState& st, const PendingAccess& s, Seq skip) {
    const bool is_sc = s.mo == MemOrder::SeqCst;
    const Seq own_fence = last_sc_fence(st, s.tid);
    std::set<Seq> out;
    if (is_sc) {
        Seq last = last_sc_store(st, s.loc);
        if (last != kNoSeq) out.insert(last);
    }
    for (const auto& [t, list] : st.alocs[s.loc].by_thread) {
        Seq a = prior_for_thread(st, t, list, is_sc, own_fence, *s.C);
        if (a != kNoSeq) out.insert(a);
    }
    out.erase(skip);
    out.erase(kNoSeq);
    return {out.begin(), out.end()};
}

ReadPrior read_prior_set(const ExecState& st, const PendingAccess& l, Seq s) {
    const bool is_sc = l.mo == MemOrder::SeqCst;
    const Seq own_fence = last_sc_fence(st, l.tid);
    std::set<Seq> set;
    for (const auto& [t, list] : st.alocs[l.loc].by_thread) {
        Seq a = prior_for_thread(st, t, list, is_sc, own_fence, *l.C);
        if (a != kNoSeq && a != s) set.insert(a);
    }
    for (Seq e : set) {
        if (st.mo.reachable(s, e)) return {{}, false};
    }
    return {{set.begin(), set.end()}, true};
}

}  // namespace wmm
