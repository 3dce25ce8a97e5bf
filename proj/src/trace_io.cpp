#include "wmm/trace_io.hpp"

#include <sstream>

namespace wmm {

std::string format_race(const Program& p, const RaceReport& r) {
    std::ostringstream os;
    os << "RACE " << to_string(r.kind) << " " << p.cell_names.at(r.cell) << " (" << r.first.tid << "@"
       << r.first.clock << " " << r.first.stmt << ") (" << r.second.tid << "@" << r.second.clock << " "
       << r.second.stmt << ")";
    return os.str();
}

std::string write_trace(const Program& p, const Trace& t) {
    std::ostringstream os;
    os << "#wmm-trace 1\n";
    for (const Event& e : t.events) {
        os << "E " << e.seq << " " << e.tid << " " << to_string(e.kind) << " ";
        const bool mem = is_memory_access(e.kind);
        os << (mem ? p.atomic_names.at(e.loc) : "-") << " ";
        os << (mem || e.kind == EventKind::Fence ? std::string(to_string(e.mo)) : "-") << " ";
        if (e.kind == EventKind::Fork || e.kind == EventKind::Join) {
            os << e.child;
        } else if (e.kind == EventKind::Fence) {
            os << "-";
        } else {
            os << e.value;
        }
        os << " " << (is_read(e.kind) ? std::to_string(e.rf) : "-") << "\n";
    }
    for (CellId c = 0; c < t.final_cells.size(); ++c) {
        os << "NA " << p.cell_names.at(c) << " " << t.final_cells[c] << "\n";
    }
    for (const auto& a : t.asserts) os << "ASSERT " << a.tid << " " << a.after_seq << " " << a.stmt << "\n";
    for (const auto& r : t.races) os << format_race(p, r) << "\n";
    if (t.deadlock) os << "DEADLOCK\n";
    return os.str();
}

}  // namespace wmm
