#pragma once

#include <string>

#include "wmm/litmus.hpp"
#include "wmm/trace.hpp"

namespace wmm {

/// Line-delimited trace dump:
///   #wmm-trace 1
///   E <seq> <tid> <kind> <loc> <mo> <value> <rf>
///   NA <cell> <value>
///   ASSERT <tid> <clock> <stmt>
///   RACE <kind> <cell> (<tid>@<clock> <stmt>) (<tid>@<clock> <stmt>)
///   DEADLOCK
/// Fields that do not apply are '-'. Fork and Join carry the other thread's
/// tid as their value. Prune bookkeeping is left out so dumps compare equal
/// across prune modes.
std::string write_trace(const Program& p, const Trace& t);

std::string format_race(const Program& p, const RaceReport& r);

}  // namespace wmm
