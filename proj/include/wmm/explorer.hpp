#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wmm/litmus.hpp"
#include "wmm/pruner.hpp"
#include "wmm/rng.hpp"
#include "wmm/trace.hpp"

namespace wmm {

/// Scheduling strategy. One instance persists across the runs of a batch.
class Plugin {
public:
    virtual ~Plugin() = default;

    virtual void begin_run(std::uint64_t seed) = 0;
    virtual void end_run(const Trace& trace) { (void)trace; }

    /// Both return an index into the offered, non-empty list.
    virtual size_t select_thread(const std::vector<Tid>& enabled) = 0;
    virtual size_t select_store(const std::vector<Seq>& candidates) = 0;

    /// Whether consecutive relaxed/release stores may run without a
    /// scheduling decision in between.
    virtual bool batching() const { return true; }
};

/// Uniform choices from a splitmix64 stream seeded by the run's seed.
class RandomPlugin : public Plugin {
public:
    void begin_run(std::uint64_t seed) override { rng_ = SplitMix64(seed); }
    size_t select_thread(const std::vector<Tid>& enabled) override { return rng_.below(enabled.size()); }
    size_t select_store(const std::vector<Seq>& candidates) override { return rng_.below(candidates.size()); }

private:
    SplitMix64 rng_;
};

/// Depth-first walk of the whole decision tree, one leaf per run.
class ExhaustivePlugin : public Plugin {
public:
    explicit ExhaustivePlugin(std::uint64_t node_budget = 1'000'000) : budget_(node_budget) {}

    void begin_run(std::uint64_t seed) override;
    void end_run(const Trace& trace) override;
    size_t select_thread(const std::vector<Tid>& enabled) override { return choose(enabled.size()); }
    size_t select_store(const std::vector<Seq>& candidates) override { return choose(candidates.size()); }
    bool batching() const override { return false; }

    /// True once every leaf has been visited.
    bool done() const { return done_; }
    /// True if the walk stopped because the budget ran out.
    bool exhausted_budget() const { return over_budget_; }
    std::uint64_t runs() const { return runs_; }

private:
    size_t choose(size_t arity);

    struct Choice {
        size_t index;
        size_t arity;
    };
    std::vector<Choice> path_;
    size_t depth_ = 0;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::uint64_t runs_ = 0;
    bool done_ = false;
    bool over_budget_ = false;
};

/// Called for every race-checked non-atomic access, before the detector.
using AccessObserver =
    std::function<void(CellId cell, bool is_write, Tid tid, const ClockVector& C, int stmt)>;

struct ExploreConfig {
    PruneConfig prune;
    AccessObserver observer;
    /// Re-run the explicit cycle search after every mo-graph commit.
    bool check_acyclic = false;
};

Trace explore(const Program& p, Plugin& plugin, std::uint64_t seed, const ExploreConfig& cfg = {});

struct Summary {
    std::uint64_t runs = 0;
    std::map<std::vector<Value>, std::uint64_t> outcomes;  // observed-cell values -> count
    std::vector<RaceReport> races;                         // first report per (kind, stmt pair)
    std::vector<AssertFailure> asserts;                    // first failure per stmt
    std::uint64_t race_runs = 0;
    std::uint64_t assert_runs = 0;
    std::uint64_t deadlock_runs = 0;
    PruneStats prune;
    std::vector<Trace> traces;  // kept only when requested

    bool has_findings() const { return race_runs || assert_runs || deadlock_runs; }
};

/// Observed-cell values of a finished run.
std::vector<Value> outcome_of(const Program& p, const Trace& t);

/// Random plugin: seeds [first_seed, first_seed + count). Exhaustive plugin:
/// ignores seeds and runs until the tree (or `count`) is exhausted.
Summary run_many(const Program& p, Plugin& plugin, std::uint64_t first_seed, std::uint64_t count,
                 const ExploreConfig& cfg = {}, bool keep_traces = false);

/// Static partition of non-atomic cells: true if more than one thread body
/// mentions the cell, so it needs race checking.
std::vector<bool> shared_cells(const Program& p);

}  // namespace wmm
