#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wmm/types.hpp"

namespace wmm {

struct Event {
    Seq seq = kNoSeq;
    Tid tid = 0;
    EventKind kind = EventKind::Init;
    LocId loc = 0;
    MemOrder mo = MemOrder::Relaxed;
    Value value = 0;       // stored value for writes, loaded value for loads
    Value read_value = 0;  // RMW only: the value it loaded
    Seq rf = kNoSeq;       // Load/RMW: the store read from
    int stmt = -1;         // static statement id; -1 for init stores
    Tid child = 0;         // Fork/Join: the other thread

    // A non-atomic write promoted into the history of an aliased location.
    // It sits on a pseudo-thread `tid`; happens-before is judged against the
    // writing thread's epoch instead.
    bool promoted = false;
    Tid hb_tid = 0;
    Epoch hb_clock = 0;

    int pruned_pass = 0;  // 0 = never pruned

    bool is_sc() const { return mo == MemOrder::SeqCst && kind != EventKind::Init; }
};

struct AssertFailure {
    Tid tid = 0;
    Epoch after_seq = 0;  // the thread's clock when the assert ran
    int stmt = -1;
};

enum class RaceKind : std::uint8_t { WriteWrite, ReadWrite, WriteRead };

std::string_view to_string(RaceKind kind);

struct Access {
    Tid tid = 0;
    Epoch clock = 0;
    int stmt = -1;
};

/// `first` is the earlier access in execution order.
struct RaceReport {
    RaceKind kind = RaceKind::WriteWrite;
    CellId cell = 0;
    Access first;
    Access second;
};

struct ThreadInfo {
    Tid tid = 0;
    Tid parent = 0;
    int fork_stmt = -1;  // -1 for the main thread
    Seq fork_seq = kNoSeq;
};

struct PruneStats {
    std::uint64_t passes = 0;
    std::uint64_t stores = 0;
    std::uint64_t loads = 0;
    std::uint64_t fences = 0;

    PruneStats& operator+=(const PruneStats& o) {
        passes += o.passes;
        stores += o.stores;
        loads += o.loads;
        fences += o.fences;
        return *this;
    }
};

/// Everything one execution produced. events[i].seq == i + 1.
struct Trace {
    std::vector<Event> events;
    std::vector<ThreadInfo> threads;  // indexed by tid; slot 0 is the init pseudo-thread
    std::vector<Value> final_cells;   // indexed by CellId
    std::vector<AssertFailure> asserts;
    std::vector<RaceReport> races;
    bool deadlock = false;

    // Modification-order constraints as requested from the mo-graph.
    std::vector<std::pair<Seq, Seq>> mo_edges;
    std::vector<std::pair<Seq, Seq>> rmw_edges;

    PruneStats prune;

    const Event& at(Seq seq) const { return events.at(seq - 1); }
    bool has_findings() const { return !asserts.empty() || !races.empty() || deadlock; }
};

}  // namespace wmm
