#pragma once

#include "wmm/clock_vector.hpp"
#include "wmm/types.hpp"

namespace wmm {

struct ThreadHB {
    Tid tid = 0;
    ClockVector C;     // thread clock
    ClockVector Frel;  // C as of the last release fence
    ClockVector Facq;  // reads-from clocks gathered by relaxed loads, applied at acquire fences
    Seq lsb = kNoSeq;   // last event of this thread
    Seq lasw = kNoSeq;  // last fork/join event that synchronized this thread
};

/// Reads-from clock of a committed store.
struct StoreHB {
    Seq seq = kNoSeq;
    ClockVector RF;
};

/// Starts a new event of `thr`: C(tid) := seq.
void advance(ThreadHB& thr, Seq seq);

StoreHB on_store(const ThreadHB& thr, Seq seq, MemOrder mo);
void on_load(ThreadHB& thr, MemOrder mo, const StoreHB& rf);

/// Load half first, then RF := (C if release else Frel) ∪ RF(source), which
/// lets a relaxed RMW carry a release sequence forward.
StoreHB on_rmw(ThreadHB& thr, Seq seq, MemOrder mo, const StoreHB& rf);

void on_fence(ThreadHB& thr, MemOrder mo);

/// Child clock at a Fork event executed by `parent` with sequence `fork_seq`.
ThreadHB on_fork(const ThreadHB& parent, Tid child, Seq fork_seq);

/// Parent absorbs the finished child's clock. The child's slot is then raised
/// to the join's own sequence number so that accesses the child made after
/// its last event are ordered before everything that follows the join.
void on_join(ThreadHB& parent, const ThreadHB& child, Seq join_seq);

}  // namespace wmm
