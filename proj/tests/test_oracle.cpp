#include <doctest.h>

#include <algorithm>

#include "support.hpp"

using namespace wmm;
using testing::load;

namespace {

/// First random-plugin trace whose observed outcome is `want`, lifted.
oracle::Execution lifted_with_outcome(const Program& p, const std::vector<Value>& want) {
    RandomPlugin plugin;
    for (std::uint64_t seed = 0; seed < 5000; ++seed) {
        Trace t = explore(p, plugin, seed);
        if (outcome_of(p, t) != want) continue;
        for (auto& x : oracle::lift_trace(p, t)) {
            if (oracle::check_consistent(x).ok) return x;
        }
    }
    FAIL("outcome not reached");
    return {};
}

void set_order(oracle::Execution& x, EventKind kind, MemOrder mo) {
    for (auto& e : x.events) {
        if (e.kind == kind) e.mo = mo;
    }
}

void rebuild_sc(oracle::Execution& x) {
    x.sc.clear();
    for (size_t i = 0; i < x.events.size(); ++i) {
        if (x.events[i].sc()) x.sc.push_back(static_cast<int>(i));
    }
}

std::set<std::vector<Value>> outcomes(const std::string& name) {
    return oracle::enumerate_consistent(load(name)).outcomes;
}

}  // namespace

TEST_CASE("enumeration: message passing") {
    CHECK(outcomes("mp_relaxed").size() == 4);
    auto relacq = outcomes("mp_relacq");
    CHECK(relacq.size() == 3);
    CHECK(relacq.count({1, 0}) == 0);
    CHECK(outcomes("mp_fences").count({1, 0}) == 0);
}

TEST_CASE("enumeration: store buffering") {
    CHECK(outcomes("sb").size() == 4);
    CHECK(outcomes("sb_sc").count({0, 0}) == 0);
    CHECK(outcomes("sb_fences").count({0, 0}) == 0);
}

TEST_CASE("enumeration: independent reads of independent writes") {
    CHECK(outcomes("iriw_relaxed").count({1, 0, 1, 0}) == 1);
    CHECK(outcomes("iriw_sc").count({1, 0, 1, 0}) == 0);
}

TEST_CASE("enumeration: coherence and atomicity") {
    auto corr = outcomes("corr");
    CHECK(corr.count({2, 1}) == 0);
    CHECK(corr.count({1, 2}) == 1);
    for (const auto& o : outcomes("rmw_chain")) CHECK(o[2] == 2);
    auto coww = outcomes("coww_cowr");
    // Each thread reads its own store or a later one, never init.
    for (const auto& o : coww) {
        CHECK(o[0] != 0);
        CHECK(o[1] != 0);
    }
    CHECK(coww.count({2, 1}) == 0);  // the two threads would disagree on mo
}

TEST_CASE("enumeration refuses large or mixed-access programs") {
    CHECK_THROWS_AS(oracle::enumerate_consistent(load("counter_loop")), oracle::BudgetExceeded);
    CHECK_THROWS_AS(oracle::enumerate_consistent(load("alias")), oracle::Unsupported);
}

TEST_CASE("canonical names follow forks and per-thread positions") {
    auto en = oracle::enumerate_consistent(load("mp_relaxed"));
    REQUIRE_FALSE(en.executions.empty());
    std::set<std::string> names;
    for (const auto& e : en.executions.front().events) names.insert(e.name);
    CHECK(names.count("init:data") == 1);
    CHECK(names.count("main.0") == 1);  // the first fork
    CHECK(names.count("f0.1") == 1);    // the flag store
    CHECK(names.count("f3.0") == 1);    // the flag load
    CHECK(en.keys.size() == en.executions.size());
}

TEST_CASE("rejections name the first violated axiom") {
    SUBCASE("write-read coherence under release/acquire") {
        oracle::Execution x = lifted_with_outcome(load("mp_relaxed"), {1, 0});
        set_order(x, EventKind::Load, MemOrder::Acquire);
        set_order(x, EventKind::Store, MemOrder::Release);
        CHECK(oracle::check_consistent(x).tag == "CoWR");
    }
    SUBCASE("seq_cst store buffering") {
        oracle::Execution x = lifted_with_outcome(load("sb"), {0, 0});
        set_order(x, EventKind::Load, MemOrder::SeqCst);
        set_order(x, EventKind::Store, MemOrder::SeqCst);
        rebuild_sc(x);
        CHECK(oracle::check_consistent(x).tag == "sc-read");
    }
    SUBCASE("store buffering through two sc fences") {
        Program p = parse_program(
            "observe r1, r2\n"
            "t1 = Fork {\n Store(1, x, relaxed)\n Fence(acquire)\n r1 = Load(y, relaxed)\n}\n"
            "t2 = Fork {\n Store(1, y, relaxed)\n Fence(acquire)\n r2 = Load(x, relaxed)\n}\n"
            "Join(t1)\nJoin(t2)\n");
        oracle::Execution x = lifted_with_outcome(p, {0, 0});
        set_order(x, EventKind::Fence, MemOrder::SeqCst);
        rebuild_sc(x);
        CHECK(oracle::check_consistent(x).tag == "sc-fence-fence-read");
    }
    SUBCASE("read-read coherence") {
        oracle::Execution x = lifted_with_outcome(load("corr"), {1, 2});
        // Swap the two reads' sources.
        std::vector<int> loads;
        for (size_t i = 0; i < x.events.size(); ++i) {
            if (x.events[i].kind == EventKind::Load) loads.push_back(static_cast<int>(i));
        }
        REQUIRE(loads.size() == 2);
        std::swap(x.rf[loads[0]], x.rf[loads[1]]);
        std::swap(x.events[loads[0]].rval, x.events[loads[1]].rval);
        CHECK(oracle::check_consistent(x).tag == "CoRR");
    }
    SUBCASE("two rmws reading the same store") {
        oracle::Execution x = lifted_with_outcome(load("rmw_chain"), {0, 1, 2});
        int first = -1, second = -1;
        for (size_t i = 0; i < x.events.size(); ++i) {
            if (x.events[i].kind != EventKind::Rmw) continue;
            (first < 0 ? first : second) = static_cast<int>(i);
        }
        // Make the second rmw read init as well.
        int later = x.events[first].rval == 1 ? first : second;
        x.rf[later] = x.rf[later == first ? second : first];
        x.events[later].rval = 0;
        CHECK(oracle::check_consistent(x).tag == "rmw-atomicity");
    }
    SUBCASE("ill-formed reads-from") {
        oracle::Execution x = lifted_with_outcome(load("mp_relaxed"), {1, 1});
        for (size_t i = 0; i < x.events.size(); ++i) {
            if (x.events[i].kind == EventKind::Load) x.events[i].rval = 9;
        }
        CHECK(oracle::check_consistent(x).tag == "rf-wellformed");
    }
}

TEST_CASE("lifting keeps unordered stores free and honours the cap") {
    Program p = parse_program(
        "a = Fork { Store(1, x, relaxed) }\nb = Fork { Store(2, x, relaxed) }\n"
        "c = Fork { Store(3, x, relaxed) }\nJoin(a)\nJoin(b)\nJoin(c)\n");
    RandomPlugin plugin;
    Trace t = explore(p, plugin, 0);
    CHECK(oracle::lift_trace(p, t).size() == 6);
    CHECK_THROWS_AS(oracle::lift_trace(p, t, 5), oracle::ExtensionBudgetExceeded);
}

TEST_CASE("lifting keeps an rmw right after the store it read") {
    Program p = load("rmw_chain");
    RandomPlugin plugin;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Trace t = explore(p, plugin, seed);
        auto lifted = oracle::lift_trace(p, t);
        REQUIRE(lifted.size() == 1);
        CHECK(oracle::check_consistent(lifted[0]).ok);
    }
}

TEST_CASE("lifting refuses promoted writes") {
    Program p = load("alias");
    RandomPlugin plugin;
    CHECK_THROWS_AS(oracle::lift_trace(p, explore(p, plugin, 0)), oracle::Unsupported);
}

TEST_CASE("describe renders every event and order") {
    auto en = oracle::enumerate_consistent(load("sb_sc"));
    std::string text = oracle::describe(load("sb_sc"), en.executions.front());
    CHECK(text.rfind("#wmm-execution 1\n", 0) == 0);
    CHECK(text.find("MO x init:x") != std::string::npos);
    CHECK(text.find("SC ") != std::string::npos);
    CHECK(text.find("OUTCOME r1=") != std::string::npos);
}

TEST_CASE("exhaustive lifting matches enumeration on small programs") {
    for (const char* name : {"mp_relaxed", "sb_sc", "rmw_chain", "mp_fences"}) {
        Program p = load(name);
        auto lifted = testing::exhaustive_lifted_keys(p);
        auto en = oracle::enumerate_consistent(p);
        INFO(name);
        CHECK(lifted.complete);
        CHECK(lifted.rejected_traces == 0);
        CHECK(lifted.keys == en.keys);
    }
}
