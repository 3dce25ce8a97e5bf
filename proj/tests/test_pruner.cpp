#include <doctest.h>

#include "support.hpp"
#include "wmm/trace_io.hpp"

using namespace wmm;
using testing::load;

namespace {

ExploreConfig with_prune(PruneMode mode, size_t trigger, Seq window = 4) {
    ExploreConfig cfg;
    cfg.prune.mode = mode;
    cfg.prune.trigger = trigger;
    cfg.prune.window = window;
    return cfg;
}

}  // namespace

TEST_CASE("prune modes round-trip through their names") {
    for (auto m : {PruneMode::Off, PruneMode::Conservative, PruneMode::Aggressive}) {
        CHECK(parse_prune_mode(to_string(m)) == m);
    }
    CHECK_FALSE(parse_prune_mode("sometimes"));
}

TEST_CASE("cv_min is the pointwise minimum over running threads") {
    ExecState st;
    st.threads.resize(4);
    st.threads[1].hb.C = ClockVector::bottom(1, 5);
    st.threads[1].hb.C.set(2, 3);
    st.threads[2].hb.C = ClockVector::bottom(1, 2);
    st.threads[2].hb.C.set(2, 7);
    st.threads[3].status = ThreadStatus::Finished;
    st.threads[3].hb.C = ClockVector::bottom(1, 1);
    ClockVector m = cv_min(st);
    CHECK(m.get(1) == 2);
    CHECK(m.get(2) == 3);
}

TEST_CASE("off mode and an unreached trigger never prune") {
    Program p = load("counter_loop");
    RandomPlugin plugin;
    CHECK(explore(p, plugin, 0, with_prune(PruneMode::Off, 1)).prune.passes == 0);
    CHECK(explore(p, plugin, 0, with_prune(PruneMode::Conservative, 1000)).prune.passes == 0);
}

TEST_CASE("conservative pruning fires repeatedly and changes nothing observable") {
    Program p = load("counter_loop");
    RandomPlugin plugin;
    const ExploreConfig cons = with_prune(PruneMode::Conservative, 6);
    PruneStats total;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Trace off = explore(p, plugin, seed);
        Trace on = explore(p, plugin, seed, cons);
        CHECK(on.prune.passes >= 3);
        total += on.prune;
        CHECK(write_trace(p, off) == write_trace(p, on));
    }
    CHECK(total.stores > 0);
    CHECK(total.loads > 0);
}

TEST_CASE("fences behind the frontier are dropped, the last sc fence is kept") {
    Program p = parse_program(
        "t1 = Fork {\n"
        "  repeat 4 {\n    Fence(acquire)\n    Store(1, x, relaxed)\n    Fence(release)\n    Fence(seq_cst)\n  }\n"
        "}\n"
        "t2 = Fork {\n  repeat 4 {\n    r = Load(x, acquire)\n    Fence(seq_cst)\n  }\n}\n"
        "Join(t1)\nJoin(t2)\n");
    RandomPlugin plugin;
    PruneStats total;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Trace off = explore(p, plugin, seed);
        Trace on = explore(p, plugin, seed, with_prune(PruneMode::Conservative, 4));
        total += on.prune;
        CHECK(write_trace(p, off) == write_trace(p, on));
    }
    CHECK(total.fences > 0);
}

TEST_CASE("pruned events carry their pass number") {
    Program p = load("counter_loop");
    RandomPlugin plugin;
    Trace t = explore(p, plugin, 3, with_prune(PruneMode::Conservative, 6));
    int max_pass = 0;
    for (const auto& e : t.events) max_pass = std::max(max_pass, e.pruned_pass);
    CHECK(max_pass >= 2);
    CHECK(static_cast<std::uint64_t>(max_pass) <= t.prune.passes);
}

TEST_CASE("aggressive pruning only yields traces the oracle accepts") {
    RandomPlugin plugin;
    for (const auto& name : testing::small_corpus()) {
        Program p = load(name);
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Trace t = explore(p, plugin, seed, with_prune(PruneMode::Aggressive, 3, 2));
            oracle::Verdict why;
            INFO(name << " seed " << seed);
            CHECK(testing::trace_consistent(p, t, &why));
        }
    }
}

TEST_CASE("aggressive pruning with no window can lose behaviors but stays consistent") {
    Program p = load("counter_loop");
    RandomPlugin plugin;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Trace t = explore(p, plugin, seed, with_prune(PruneMode::Aggressive, 4, 0));
        CHECK(t.prune.passes > 0);
        CHECK(t.final_cells[*p.find_cell("r3")] == 12);
    }
}
