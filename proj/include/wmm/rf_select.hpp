#pragma once

#include <vector>

#include "wmm/exec_state.hpp"

namespace wmm {

/// An atomic access about to be committed. `C` is the accessing thread's
/// clock with its own slot already advanced to `seq`.
struct PendingAccess {
    Seq seq = kNoSeq;
    Tid tid = 0;
    LocId loc = 0;
    MemOrder mo = MemOrder::Relaxed;
    bool is_rmw = false;
    const ClockVector* C = nullptr;
};

/// Candidate stores for a load or RMW, in descending sequence order.
std::vector<Seq> build_may_read_from(const ExecState& st, const PendingAccess& l);

/// Stores that must be mo-before the new store. `skip` (the RMW's own
/// source, if any) is left out.
std::vector<Seq> write_prior_set(const ExecState& st, const PendingAccess& s, Seq skip = kNoSeq);

struct ReadPrior {
    std::vector<Seq> set;
    bool accept = false;
};

/// Stores that must be mo-before `s` if the access reads from it, and whether
/// that choice keeps the mo-graph acyclic.
ReadPrior read_prior_set(const ExecState& st, const PendingAccess& l, Seq s);

}  // namespace wmm
