#include <doctest.h>

#include "support.hpp"
#include "wmm/race.hpp"

using namespace wmm;
using testing::load;

namespace {

ClockVector clock_of(std::initializer_list<std::pair<Tid, Epoch>> entries) {
    ClockVector cv;
    for (auto [t, e] : entries) cv.set(t, e);
    return cv;
}

}  // namespace

TEST_CASE("shadow word packs both epochs and the flags") {
    ShadowWord w;
    CHECK_FALSE(w.write());
    CHECK_FALSE(w.read());
    w.set_write(5, 1000);
    w.set_read(63, (1u << 25) - 3);
    REQUIRE(w.write());
    CHECK(w.write()->tid == 5);
    CHECK(w.write()->clock == 1000);
    CHECK(w.read()->tid == 63);
    CHECK(w.read()->clock == (1u << 25) - 3);
    CHECK_FALSE(w.expanded());
    CHECK_FALSE(w.atomic_written());
    w.clear_read();
    CHECK_FALSE(w.read());
    CHECK(w.write()->clock == 1000);
    CHECK(ShadowWord::fits(63, 0));
    CHECK_FALSE(ShadowWord::fits(64, 0));
    CHECK_FALSE(ShadowWord::fits(1, (1u << 25) - 2));
}

TEST_CASE("unordered writes race, ordered ones do not") {
    RaceDetector d(1);
    CHECK_FALSE(d.access(0, true, 1, clock_of({{1, 3}}), 10));
    auto r = d.access(0, true, 2, clock_of({{2, 4}}), 11);
    REQUIRE(r);
    CHECK(r->kind == RaceKind::WriteWrite);
    CHECK(r->first.tid == 1);
    CHECK(r->first.stmt == 10);
    CHECK(r->second.stmt == 11);
    // Thread 3 has seen thread 2 past its write.
    CHECK_FALSE(d.access(0, true, 3, clock_of({{1, 4}, {2, 5}, {3, 6}}), 12));
}

TEST_CASE("an epoch equal to the observed clock is not ordered") {
    RaceDetector d(1);
    d.access(0, true, 1, clock_of({{1, 3}}), 0);
    // Having seen event 3 of thread 1 does not cover an access made after it.
    CHECK(d.access(0, false, 2, clock_of({{1, 3}, {2, 5}}), 1));
    RaceDetector e(1);
    e.access(0, true, 1, clock_of({{1, 3}}), 0);
    CHECK_FALSE(e.access(0, false, 2, clock_of({{1, 4}, {2, 5}}), 1));
}

TEST_CASE("same thread never races with itself") {
    RaceDetector d(1);
    d.access(0, true, 1, clock_of({{1, 3}}), 0);
    CHECK_FALSE(d.access(0, false, 1, clock_of({{1, 3}}), 1));
    CHECK_FALSE(d.access(0, true, 1, clock_of({{1, 7}}), 2));
}

TEST_CASE("concurrent readers expand the word and a later write sees both") {
    RaceDetector d(1);
    CHECK_FALSE(d.access(0, false, 1, clock_of({{1, 2}}), 0));
    CHECK_FALSE(d.access(0, false, 2, clock_of({{2, 3}}), 1));
    CHECK(d.expanded(0));
    // Ordered after thread 1's read only.
    auto r = d.access(0, true, 3, clock_of({{1, 5}, {3, 6}}), 2);
    REQUIRE(r);
    CHECK(r->kind == RaceKind::ReadWrite);
    CHECK(r->first.tid == 2);
    // The write cleared the readers; the cell is compact again.
    CHECK_FALSE(d.expanded(0));
}

TEST_CASE("large clocks and tids force the expanded form") {
    RaceDetector d(2);
    d.access(0, true, 1, clock_of({{1, Epoch{1} << 26}}), 0);
    CHECK(d.expanded(0));
    CHECK(d.last_write(0)->clock == Epoch{1} << 26);
    d.access(1, true, 70, clock_of({{70, 5}}), 0);
    CHECK(d.expanded(1));
    CHECK(d.access(1, true, 2, clock_of({{2, 6}}), 1));
}

TEST_CASE("atomic accesses to a mixed cell do not race with each other") {
    RaceDetector d(1);
    d.access(0, true, 1, clock_of({{1, 3}}), 0, true);
    CHECK(d.atomic_written(0));
    CHECK_FALSE(d.access(0, true, 2, clock_of({{2, 4}}), 1, true));
    CHECK_FALSE(d.access(0, false, 3, clock_of({{3, 5}}), 2, true));
    // A plain access still races with the unordered atomic write.
    CHECK(d.access(0, false, 4, clock_of({{4, 6}}), 3));
    d.note_atomic_write(0);
    CHECK(d.atomic_written(0));
}

TEST_CASE("unsynchronized non-atomic writes race") {
    Program p = load("na_race");
    RandomPlugin plugin;
    Summary s = run_many(p, plugin, 0, 500);
    CHECK(s.race_runs > 0);
    for (const auto& r : s.races) CHECK(r.kind == RaceKind::WriteWrite);
}

TEST_CASE("release/acquire publication of non-atomic data is race free") {
    Program p = load("na_mp");
    RandomPlugin plugin;
    Summary s = run_many(p, plugin, 0, 1000);
    CHECK(s.race_runs == 0);
    CHECK(s.outcomes.count({1, 42}) == 1);
}

TEST_CASE("relaxed publication races exactly when the data is read") {
    Program p = load("na_mp_relaxed");
    RandomPlugin plugin;
    std::uint64_t read_runs = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Trace t = explore(p, plugin, seed);
        bool read = t.final_cells[*p.find_cell("r1")] == 1;
        read_runs += read;
        CHECK(read == !t.races.empty());
    }
    CHECK(read_runs > 0);
}

TEST_CASE("property: compact detector agrees with a full-history detector") {
    SplitMix64 rng(21);
    RandomPlugin plugin;
    int programs = 0, racy = 0;
    for (int i = 0; i < 300; ++i) {
        Program p = parse_program(testing::random_program_text(rng, 8));
        ++programs;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            testing::NaiveRaceDetector naive;
            ExploreConfig cfg;
            cfg.observer = [&](CellId c, bool w, Tid t, const ClockVector& C, int stmt) { naive.access(c, w, t, C, stmt); };
            Trace t = explore(p, plugin, seed, cfg);
            CHECK(naive.raced() == !t.races.empty());
            if (naive.raced() && !t.races.empty()) {
                ++racy;
                CHECK(naive.first_race_stmt() == t.races.front().second.stmt);
            }
        }
    }
    CHECK(racy > 0);
}
