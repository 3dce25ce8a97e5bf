#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "wmm/hb.hpp"

using namespace wmm;
using testing::load;

namespace {

ThreadHB thread_at(Tid tid, Seq seq) {
    ThreadHB t;
    t.tid = tid;
    advance(t, seq);
    return t;
}

}  // namespace

TEST_CASE("release store publishes the thread clock, relaxed store the fence clock") {
    ThreadHB t = thread_at(1, 5);
    t.C.set(2, 3);
    CHECK(on_store(t, 5, MemOrder::Release).RF == t.C);
    CHECK(on_store(t, 5, MemOrder::Relaxed).RF.empty());
    on_fence(t, MemOrder::Release);
    advance(t, 6);
    StoreHB s = on_store(t, 6, MemOrder::Relaxed);
    CHECK(s.RF.get(1) == 5);
    CHECK(s.RF.get(2) == 3);
}

TEST_CASE("acquire load joins the reads-from clock, relaxed load defers it to a fence") {
    StoreHB rf{4, ClockVector::bottom(2, 4)};
    ThreadHB a = thread_at(1, 7);
    on_load(a, MemOrder::Acquire, rf);
    CHECK(a.C.get(2) == 4);

    ThreadHB b = thread_at(1, 7);
    on_load(b, MemOrder::Relaxed, rf);
    CHECK(b.C.get(2) == 0);
    CHECK(b.Facq.get(2) == 4);
    advance(b, 8);
    on_fence(b, MemOrder::Acquire);
    CHECK(b.C.get(2) == 4);
}

TEST_CASE("relaxed rmw continues the release sequence it reads from") {
    StoreHB head{3, ClockVector::bottom(2, 3)};
    ThreadHB t = thread_at(1, 9);
    StoreHB out = on_rmw(t, 9, MemOrder::Relaxed, head);
    CHECK(out.RF.get(2) == 3);
    CHECK(out.RF.get(1) == 0);
    CHECK(t.C.get(2) == 0);
}

TEST_CASE("release rmw publishes its own clock as well") {
    StoreHB head{3, ClockVector::bottom(2, 3)};
    ThreadHB t = thread_at(1, 9);
    StoreHB out = on_rmw(t, 9, MemOrder::AcqRel, head);
    CHECK(out.RF.get(1) == 9);
    CHECK(out.RF.get(2) == 3);
    CHECK(t.C.get(2) == 3);
}

TEST_CASE("seq_cst fence acquires before it releases") {
    ThreadHB t = thread_at(1, 4);
    t.Facq = ClockVector::bottom(3, 2);
    on_fence(t, MemOrder::SeqCst);
    CHECK(t.Frel.get(3) == 2);
}

TEST_CASE("fork and join") {
    ThreadHB parent = thread_at(1, 3);
    ThreadHB child = on_fork(parent, 2, 3);
    CHECK(child.C.get(1) == 3);
    CHECK(child.C.get(2) == 3);
    advance(child, 5);
    advance(parent, 6);
    advance(parent, 7);
    on_join(parent, child, 7);
    CHECK(parent.C.get(2) == 7);
    CHECK(parent.lasw == 7);
}

TEST_CASE("message passing with release/acquire: the reader's clock covers the writer") {
    Program p = load("mp_relacq");
    RandomPlugin plugin;
    bool saw_sync = false;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Trace t = explore(p, plugin, seed);
        for (const auto& e : t.events) {
            if (e.kind != EventKind::Load || e.loc != *p.find_loc("flag") || e.value != 1) continue;
            saw_sync = true;
            // The data load that follows must see the write.
            auto next = std::find_if(t.events.begin() + static_cast<std::ptrdiff_t>(e.seq), t.events.end(),
                                     [&](const Event& x) { return x.tid == e.tid; });
            REQUIRE(next != t.events.end());
            REQUIRE(next->kind == EventKind::Load);
            CHECK(next->value == 1);
        }
    }
    CHECK(saw_sync);
}
