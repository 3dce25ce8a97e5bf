#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "wmm/litmus.hpp"
#include "wmm/trace.hpp"

// Axiomatic reference model. It shares nothing with the engine except the
// parsed Program and the Trace it is asked to lift.
namespace wmm::oracle {

struct OEvent {
    std::string name;  // canonical: "<thread key>.<index>" or "init:<loc>"
    int thread = -1;   // -1 for init stores
    EventKind kind = EventKind::Init;
    LocId loc = 0;
    MemOrder mo = MemOrder::Relaxed;
    Value wval = 0;  // value written (Init/Store/Rmw)
    Value rval = 0;  // value read (Load/Rmw)

    bool reads() const { return is_read(kind); }
    bool writes() const { return is_write(kind); }
    bool sc() const { return mo == MemOrder::SeqCst && kind != EventKind::Init; }
    bool fence() const { return kind == EventKind::Fence; }
};

struct Execution {
    std::vector<OEvent> events;
    std::vector<std::pair<int, int>> sb;   // immediate program-order successors
    std::vector<std::pair<int, int>> asw;  // fork/join edges
    std::vector<int> rf;                   // by event; -1 for non-reads
    std::vector<std::vector<int>> mo;      // by LocId; total order, init first
    std::vector<int> sc;                   // total order of sc events
    std::vector<Value> outcome;            // observed-cell values
};

struct Verdict {
    bool ok = true;
    std::string tag;     // first failed axiom
    std::string detail;  // offending events
};

/// Axioms, checked in this order:
///   rf-wellformed, hb-cycle, rmw-atomicity, rf-hb,
///   CoWW, CoWR, CoRW, CoRR, sc-hb, sc-mo, sc-read,
///   sc-fence-read (fence sb read), sc-fence-write-read (write sb fence, sc read),
///   sc-fence-fence-read, sc-fence-fence-write, sc-fence-write (write sb fence, sc write),
///   sc-write-fence (sc write, fence sb write), hb-sc-rf-cycle.
Verdict check_consistent(const Execution& x);

/// Observed values, rf map, per-location mo and sc order over canonical names.
std::string canonical_key(const Execution& x);

/// Outcome part of a key, e.g. "r1=1 r2=0".
std::string outcome_string(const Program& p, const std::vector<Value>& outcome);

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ExtensionBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Unsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Enumeration {
    std::vector<Execution> executions;  // one representative per key, in key order
    std::set<std::string> keys;
    std::set<std::vector<Value>> outcomes;
    std::uint64_t candidates = 0;  // executions checked
};

/// Every consistent execution of `p`. Throws BudgetExceeded if a run can
/// perform more than `bound` load/store/RMW/fence events.
Enumeration enumerate_consistent(const Program& p, int bound = 8);

/// One Execution per linear extension of the trace's mo constraints (rmw
/// successors kept adjacent). Throws ExtensionBudgetExceeded past `cap`.
std::vector<Execution> lift_trace(const Program& p, const Trace& t, size_t cap = 4096);

/// Text rendering in the trace dump's line style, for counterexamples.
std::string describe(const Program& p, const Execution& x);

}  // namespace wmm::oracle
