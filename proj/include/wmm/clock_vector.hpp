#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wmm/types.hpp"

namespace wmm {

/// Map from thread id to epoch. Absent entries read as zero; zero entries are
/// never stored, so structural equality coincides with pointwise equality.
class ClockVector {
public:
    ClockVector() = default;

    /// {tid -> seq}, zero elsewhere.
    static ClockVector bottom(Tid tid, Epoch seq);

    Epoch get(Tid tid) const;
    void set(Tid tid, Epoch value);

    /// In-place pointwise max. Returns true if any entry grew.
    bool merge(const ClockVector& other);

    bool empty() const { return entries_.empty(); }
    const std::vector<std::pair<Tid, Epoch>>& entries() const { return entries_; }

    std::string to_string() const;

    friend bool operator==(const ClockVector&, const ClockVector&) = default;

private:
    std::vector<std::pair<Tid, Epoch>> entries_;  // sorted by tid, no zero epochs
};

ClockVector unite(const ClockVector& a, const ClockVector& b);
ClockVector intersect(const ClockVector& a, const ClockVector& b);
bool leq(const ClockVector& a, const ClockVector& b);

}  // namespace wmm
