#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wmm {

using Tid = std::uint32_t;
using Seq = std::uint64_t;
using Epoch = std::uint64_t;
using Value = std::int64_t;
using LocId = std::uint32_t;
using CellId = std::uint32_t;

/// Thread 0 is the pseudo-thread that owns the implicit initialization stores.
inline constexpr Tid kInitThread = 0;
inline constexpr Tid kMainThread = 1;

/// Sequence number 0 never names an event.
inline constexpr Seq kNoSeq = 0;

enum class MemOrder : std::uint8_t { Relaxed, Acquire, Release, AcqRel, SeqCst };

constexpr bool is_acquire(MemOrder mo) {
    return mo == MemOrder::Acquire || mo == MemOrder::AcqRel || mo == MemOrder::SeqCst;
}

constexpr bool is_release(MemOrder mo) {
    return mo == MemOrder::Release || mo == MemOrder::AcqRel || mo == MemOrder::SeqCst;
}

std::string_view to_string(MemOrder mo);
std::optional<MemOrder> parse_mem_order(std::string_view text);

enum class EventKind : std::uint8_t { Init, Load, Store, Rmw, Fence, Fork, Join };

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

constexpr bool is_write(EventKind k) {
    return k == EventKind::Init || k == EventKind::Store || k == EventKind::Rmw;
}

constexpr bool is_read(EventKind k) { return k == EventKind::Load || k == EventKind::Rmw; }

constexpr bool is_memory_access(EventKind k) { return is_write(k) || is_read(k); }

}  // namespace wmm

namespace wmm {

/// An internal consistency check failed. The CLI maps this to exit code 3.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace wmm

namespace wmm {

/// The program did something the static checks could not rule out, such as
/// joining a handle that no Fork wrote. The CLI maps this to exit code 2.
class ProgramError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wmm
