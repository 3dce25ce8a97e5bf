#pragma once

#include <set>
#include <string>
#include <vector>

#include "wmm/explorer.hpp"
#include "wmm/litmus.hpp"
#include "wmm/mo_graph.hpp"
#include "wmm/oracle.hpp"
#include "wmm/rng.hpp"

namespace wmm::testing {

std::string corpus_path(const std::string& name);
Program load(const std::string& name);

/// Corpus programs small enough for exhaustive enumeration.
std::vector<std::string> small_corpus();
/// Every corpus program the oracle can model (no mixed-access aliases).
std::vector<std::string> modelled_corpus();

// ---------------------------------------------------------------------------
// Randomized mo-graph construction shared by the reachability properties.

struct MoGraphCheck {
    std::uint64_t sequences = 0;
    std::uint64_t steps = 0;
    std::uint64_t pairs = 0;
    std::uint64_t rmw_edges = 0;
    std::uint64_t reachability_mismatches = 0;  // clock test vs explicit search
    std::uint64_t edge_cv_violations = 0;       // an edge whose source cv is not below its target
    std::uint64_t own_slot_violations = 0;      // a node whose own-thread entry moved
    std::uint64_t shrinking_cvs = 0;            // a cv that lost an entry between steps
    std::uint64_t cycles = 0;
};

/// Builds `sequences` random same-location graphs of at most `max_nodes`
/// stores, mirroring the engine's usage: a new store is ordered after its
/// thread's previous store, extra edges never close a cycle, and RMW nodes
/// attach to a source that has no RMW yet. Every ordered pair is compared
/// after every step.
MoGraphCheck check_random_mo_graphs(std::uint64_t seed, int sequences, int max_nodes);

// ---------------------------------------------------------------------------
// Reference race detector: every access is kept, no compaction.

class NaiveRaceDetector {
public:
    void access(CellId cell, bool is_write, Tid tid, const ClockVector& C, int stmt);
    bool raced() const { return first_.has_value(); }
    /// Statement of the later access in the first race found.
    int first_race_stmt() const { return first_ ? *first_ : -1; }

private:
    struct Record {
        CellId cell;
        bool write;
        Tid tid;
        Epoch clock;
    };
    std::vector<Record> history_;
    std::optional<int> first_;
};

/// Random program text with two or three threads over shared non-atomic
/// cells and atomic flags. At most `max_stmts` statements in total.
std::string random_program_text(SplitMix64& rng, int max_stmts);

/// Random expression text, fully parenthesized.
std::string random_expr_text(SplitMix64& rng, int depth);

// ---------------------------------------------------------------------------
// Lifting helpers.

/// True if some lifted execution of the trace is consistent. On failure,
/// `why` holds the verdict of the first extension.
bool trace_consistent(const Program& p, const Trace& t, oracle::Verdict* why = nullptr);

struct LiftedSet {
    std::set<std::string> keys;
    std::uint64_t runs = 0;
    std::uint64_t rejected_traces = 0;
    bool complete = false;
};

/// Canonical keys of every consistent lifted execution over the full
/// exhaustive-plugin decision tree.
LiftedSet exhaustive_lifted_keys(const Program& p, std::uint64_t node_budget = 2'000'000);

}  // namespace wmm::testing
