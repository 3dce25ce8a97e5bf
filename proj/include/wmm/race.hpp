#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wmm/clock_vector.hpp"
#include "wmm/trace.hpp"

namespace wmm {

/// Packed per-cell access record.
///
///   bits  0..24  last write clock + 1 (0 = no write)
///   bits 25..30  last write tid
///   bits 31..55  last read clock + 1 (0 = no read)
///   bits 56..61  last read tid
///   bit  62      last write was atomic
///   bit  63      expanded: bits 0..61 index an ExpandedRecord
///
/// A clock here is the accessing thread's own clock entry, i.e. the sequence
/// number of its most recent event. Access (t, c) is ordered before a later
/// access by a thread with clock C iff t is that thread or c < C(t).
class ShadowWord {
public:
    static constexpr int kClockBits = 25;
    static constexpr int kTidBits = 6;
    static constexpr std::uint64_t kClockLimit = (1ULL << kClockBits) - 1;  // max stored clock + 1
    static constexpr std::uint64_t kTidLimit = 1ULL << kTidBits;
    static constexpr std::uint64_t kAtomicBit = 1ULL << 62;
    static constexpr std::uint64_t kExpandedBit = 1ULL << 63;

    std::uint64_t raw = 0;

    bool expanded() const { return raw & kExpandedBit; }
    bool atomic_written() const { return raw & kAtomicBit; }
    std::uint64_t index() const { return raw & ~(kExpandedBit | kAtomicBit); }

    static bool fits(Tid tid, Epoch clock) { return tid < kTidLimit && clock + 1 < kClockLimit; }

    std::optional<Access> write() const;
    std::optional<Access> read() const;
    void set_write(Tid tid, Epoch clock);
    void set_read(Tid tid, Epoch clock);
    void clear_read();
};

struct ExpandedRecord {
    std::optional<Access> write;
    std::vector<Access> reads;  // one per reading thread, sorted by tid
};

/// FastTrack-style detector over non-atomic cells.
class RaceDetector {
public:
    explicit RaceDetector(size_t ncells = 0);

    /// Checks an access against the cell's history, then records it. An
    /// atomic access (mixed-access cells only) never races with another
    /// atomic access and is not remembered as a read.
    std::optional<RaceReport> access(CellId cell, bool is_write, Tid tid, const ClockVector& C, int stmt,
                                     bool atomic = false);

    /// Marks the last store to `cell` as atomic.
    void note_atomic_write(CellId cell);

    bool atomic_written(CellId cell) const { return words_.at(cell).atomic_written(); }
    bool expanded(CellId cell) const { return words_.at(cell).expanded(); }
    std::optional<Access> last_write(CellId cell) const;

private:
    ExpandedRecord load(CellId cell) const;
    void store(CellId cell, const ExpandedRecord& rec);

    std::vector<ShadowWord> words_;
    std::vector<ExpandedRecord> expanded_;
    // Statement ids do not fit in the word; keep them beside it.
    std::vector<int> write_stmt_;
    std::vector<int> read_stmt_;
};

}  // namespace wmm
