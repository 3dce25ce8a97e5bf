#include "wmm/race.hpp"

#include <algorithm>

namespace wmm {

std::string_view to_string(RaceKind kind) {
    switch (kind) {
    case RaceKind::WriteWrite: return "write-write";
    case RaceKind::ReadWrite: return "read-write";
    case RaceKind::WriteRead: return "write-read";
    }
    return "?";
}

namespace {

constexpr std::uint64_t kClockMask = (1ULL << ShadowWord::kClockBits) - 1;
constexpr std::uint64_t kTidMask = (1ULL << ShadowWord::kTidBits) - 1;
constexpr int kWriteTidShift = 25;
constexpr int kReadClockShift = 31;
constexpr int kReadTidShift = 56;

}  // namespace

std::optional<Access> ShadowWord::write() const {
    std::uint64_t c = raw & kClockMask;
    if (c == 0) return std::nullopt;
    return Access{static_cast<Tid>((raw >> kWriteTidShift) & kTidMask), c - 1, -1};
}

std::optional<Access> ShadowWord::read() const {
    std::uint64_t c = (raw >> kReadClockShift) & kClockMask;
    if (c == 0) return std::nullopt;
    return Access{static_cast<Tid>((raw >> kReadTidShift) & kTidMask), c - 1, -1};
}

void ShadowWord::set_write(Tid tid, Epoch clock) {
    raw &= ~(kClockMask | (kTidMask << kWriteTidShift));
    raw |= (clock + 1) | (std::uint64_t{tid} << kWriteTidShift);
}

void ShadowWord::set_read(Tid tid, Epoch clock) {
    raw &= ~((kClockMask << kReadClockShift) | (kTidMask << kReadTidShift));
    raw |= ((clock + 1) << kReadClockShift) | (std::uint64_t{tid} << kReadTidShift);
}

void ShadowWord::clear_read() { raw &= ~((kClockMask << kReadClockShift) | (kTidMask << kReadTidShift)); }

RaceDetector::RaceDetector(size_t ncells) : words_(ncells), write_stmt_(ncells, -1), read_stmt_(ncells, -1) {}

ExpandedRecord RaceDetector::load(CellId cell) const {
    const ShadowWord& w = words_[cell];
    if (w.expanded()) return expanded_[w.index()];
    ExpandedRecord rec;
    rec.write = w.write();
    if (rec.write) rec.write->stmt = write_stmt_[cell];
    if (auto r = w.read()) {
        r->stmt = read_stmt_[cell];
        rec.reads.push_back(*r);
    }
    return rec;
}

void RaceDetector::store(CellId cell, const ExpandedRecord& rec) {
    ShadowWord& w = words_[cell];
    const std::uint64_t atomic = w.raw & ShadowWord::kAtomicBit;
    bool compact = rec.reads.size() <= 1;
    if (rec.write && !ShadowWord::fits(rec.write->tid, rec.write->clock)) compact = false;
    for (const auto& r : rec.reads) {
        if (!ShadowWord::fits(r.tid, r.clock)) compact = false;
    }
    if (compact) {
        // An expanded slot is abandoned when the cell drops back to the
        // compact form; records are small and runs are short.
        w.raw = atomic;
        if (rec.write) {
            w.set_write(rec.write->tid, rec.write->clock);
            write_stmt_[cell] = rec.write->stmt;
        }
        if (!rec.reads.empty()) {
            w.set_read(rec.reads[0].tid, rec.reads[0].clock);
            read_stmt_[cell] = rec.reads[0].stmt;
        }
        return;
    }
    if (w.expanded()) {
        expanded_[w.index()] = rec;
    } else {
        w.raw = atomic | ShadowWord::kExpandedBit | expanded_.size();
        expanded_.push_back(rec);
    }
}

std::optional<RaceReport> RaceDetector::access(CellId cell, bool is_write, Tid tid, const ClockVector& C,
                                               int stmt, bool atomic) {
    const Access cur{tid, C.get(tid), stmt};
    auto ordered = [&](const Access& prior) { return prior.tid == tid || prior.clock < C.get(prior.tid); };

    ExpandedRecord rec = load(cell);
    const bool last_atomic = words_[cell].atomic_written();
    std::optional<RaceReport> report;
    if (rec.write && !ordered(*rec.write) && !(atomic && last_atomic)) {
        report = RaceReport{is_write ? RaceKind::WriteWrite : RaceKind::WriteRead, cell, *rec.write, cur};
    }
    if (is_write && !report) {
        for (const auto& r : rec.reads) {
            if (!ordered(r)) {
                report = RaceReport{RaceKind::ReadWrite, cell, r, cur};
                break;
            }
        }
    }

    if (is_write) {
        rec.write = cur;
        rec.reads.clear();
        store(cell, rec);
        if (atomic) {
            words_[cell].raw |= ShadowWord::kAtomicBit;
        } else {
            words_[cell].raw &= ~ShadowWord::kAtomicBit;
        }
    } else if (!atomic) {
        std::erase_if(rec.reads, [&](const Access& r) { return ordered(r); });
        auto pos = std::lower_bound(rec.reads.begin(), rec.reads.end(), tid,
                                    [](const Access& a, Tid t) { return a.tid < t; });
        rec.reads.insert(pos, cur);
        store(cell, rec);
    }
    return report;
}

void RaceDetector::note_atomic_write(CellId cell) { words_.at(cell).raw |= ShadowWord::kAtomicBit; }

std::optional<Access> RaceDetector::last_write(CellId cell) const { return load(cell).write; }

}  // namespace wmm
