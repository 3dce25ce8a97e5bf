#include "wmm/clock_vector.hpp"

#include <algorithm>

namespace wmm {

namespace {

auto find_slot(const std::vector<std::pair<Tid, Epoch>>& v, Tid tid) {
    return std::lower_bound(v.begin(), v.end(), tid, [](const auto& e, Tid t) { return e.first < t; });
}

}  // namespace

ClockVector ClockVector::bottom(Tid tid, Epoch seq) {
    ClockVector cv;
    cv.set(tid, seq);
    return cv;
}

Epoch ClockVector::get(Tid tid) const {
    auto it = find_slot(entries_, tid);
    return it != entries_.end() && it->first == tid ? it->second : 0;
}

void ClockVector::set(Tid tid, Epoch value) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), tid,
                               [](const auto& e, Tid t) { return e.first < t; });
    if (it != entries_.end() && it->first == tid) {
        if (value == 0) {
            entries_.erase(it);
        } else {
            it->second = value;
        }
    } else if (value != 0) {
        entries_.insert(it, {tid, value});
    }
}

bool ClockVector::merge(const ClockVector& other) {
    if (leq(other, *this)) return false;
    *this = unite(*this, other);
    return true;
}

std::string ClockVector::to_string() const {
    std::string out = "{";
    for (size_t i = 0; i < entries_.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(entries_[i].first) + ":" + std::to_string(entries_[i].second);
    }
    return out + "}";
}

ClockVector unite(const ClockVector& a, const ClockVector& b) {
    ClockVector out;
    const auto& x = a.entries();
    const auto& y = b.entries();
    size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
            out.set(x[i].first, x[i].second);
            ++i;
        } else if (i == x.size() || y[j].first < x[i].first) {
            out.set(y[j].first, y[j].second);
            ++j;
        } else {
            out.set(x[i].first, std::max(x[i].second, y[j].second));
            ++i;
            ++j;
        }
    }
    return out;
}

ClockVector intersect(const ClockVector& a, const ClockVector& b) {
    ClockVector out;
    for (const auto& [tid, epoch] : a.entries()) {
        Epoch m = std::min(epoch, b.get(tid));
        if (m) out.set(tid, m);
    }
    return out;
}

bool leq(const ClockVector& a, const ClockVector& b) {
    const auto& x = a.entries();
    const auto& y = b.entries();
    size_t j = 0;
    for (const auto& [tid, epoch] : x) {
        while (j < y.size() && y[j].first < tid) ++j;
        if (j == y.size() || y[j].first != tid || y[j].second < epoch) return false;
    }
    return true;
}

}  // namespace wmm
