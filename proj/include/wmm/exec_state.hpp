#pragma once

#include <map>
#include <vector>

#include "wmm/hb.hpp"
#include "wmm/litmus.hpp"
#include "wmm/mo_graph.hpp"
#include "wmm/trace.hpp"

namespace wmm {

enum class ThreadStatus : std::uint8_t { Running, Finished };

struct Frame {
    const std::vector<Stmt>* stmts = nullptr;
    size_t pc = 0;
};

struct ThreadState {
    ThreadHB hb;
    std::vector<Frame> stack;  // empty once the thread has finished
    ThreadStatus status = ThreadStatus::Running;

    const Stmt* next() const {
        return stack.empty() ? nullptr : &(*stack.back().stmts)[stack.back().pc];
    }
};

/// Atomic accesses to one location, per thread, in sequence order.
struct LocHistory {
    std::map<Tid, std::vector<Seq>> by_thread;
};

/// Engine-side bookkeeping attached to each committed event.
struct EventMeta {
    ClockVector cv;     // thread clock right after the event
    ClockVector rf_cv;  // reads-from clock (writes only)
    bool read_by_rmw = false;
    bool live = true;   // still present in histories
};

struct ExecState {
    const Program* prog = nullptr;
    Seq seq = 0;

    std::vector<Event> events;  // events[s - 1] has seq s
    std::vector<EventMeta> meta;

    std::vector<ThreadState> threads;  // indexed by tid; slot 0 is the init pseudo-thread
    std::vector<ThreadInfo> thread_info;

    std::vector<LocHistory> alocs;     // indexed by LocId
    std::vector<Value> cells;          // indexed by CellId
    std::map<Tid, std::vector<Seq>> sc_fences;
    std::map<Tid, std::vector<Seq>> fences;  // every fence still tracked, for pruning
    MoGraph mo;

    const Event& ev(Seq s) const { return events[s - 1]; }
    Event& ev(Seq s) { return events[s - 1]; }
    const EventMeta& info(Seq s) const { return meta[s - 1]; }
    EventMeta& info(Seq s) { return meta[s - 1]; }

    /// Appends an event with the next sequence number and returns that number.
    Seq commit(Event e, EventMeta m);

    /// Number of events still referenced by histories and fence lists.
    size_t live_events() const;
};

/// X happens-before an access made by a thread whose clock is `C`.
bool hb_before(const ExecState& st, Seq x, const ClockVector& C);

}  // namespace wmm
