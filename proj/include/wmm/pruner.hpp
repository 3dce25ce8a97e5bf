#pragma once

#include <string_view>

#include "wmm/exec_state.hpp"

namespace wmm {

enum class PruneMode : std::uint8_t { Off, Conservative, Aggressive };

std::string_view to_string(PruneMode mode);
std::optional<PruneMode> parse_prune_mode(std::string_view text);

struct PruneConfig {
    PruneMode mode = PruneMode::Off;
    size_t trigger = 64;  // prune once more than this many events are live
    Seq window = 32;      // aggressive only, in sequence numbers
};

/// Pointwise minimum of the clocks of all unfinished threads.
ClockVector cv_min(const ExecState& st);

PruneStats prune_conservative(ExecState& st);
PruneStats prune_aggressive(ExecState& st, Seq window);

/// Runs one pass of the configured mode if the live-event count is above the
/// trigger. Consumes no randomness.
PruneStats maybe_prune(ExecState& st, const PruneConfig& cfg);

}  // namespace wmm
