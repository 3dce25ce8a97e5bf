#include "wmm/mo_graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace wmm {

MoGraph::Node& MoGraph::get_node(Seq seq, Tid tid, LocId loc) {
    auto [it, inserted] = nodes_.try_emplace(seq);
    Node& n = it->second;
    if (inserted) {
        n.seq = seq;
        n.tid = tid;
        n.loc = loc;
        n.cv = ClockVector::bottom(tid, seq);
    }
    return n;
}

const MoGraph::Node* MoGraph::find(Seq seq) const {
    auto it = nodes_.find(seq);
    return it == nodes_.end() ? nullptr : &it->second;
}

MoGraph::Node* MoGraph::find(Seq seq) {
    auto it = nodes_.find(seq);
    return it == nodes_.end() ? nullptr : &it->second;
}

bool MoGraph::merge(Node& dst, const Node& src) { return dst.cv.merge(src.cv); }

void MoGraph::insert_edge(Node& from, Seq to) {
    auto it = std::lower_bound(from.edges.begin(), from.edges.end(), to);
    if (it == from.edges.end() || *it != to) from.edges.insert(it, to);
}

void MoGraph::add_edge(Seq from, Seq to) {
    requested_.emplace_back(from, to);
    add_edge_impl(from, to);
}

void MoGraph::add_edge_impl(Seq from_seq, Seq to_seq) {
    Node* from = find(from_seq);
    Node* to = find(to_seq);
    if (!from || !to) throw InvariantError("mo-graph edge between unknown nodes");
    if (from == to) throw InvariantError("mo-graph self edge on " + std::to_string(from_seq));
    if (from->loc != to->loc) throw InvariantError("mo-graph edge across locations");

    bool must_add = from->rmw == to_seq || from->tid == to->tid;
    if (leq(from->cv, to->cv) && !must_add) return;
    while (from->rmw != kNoSeq) {
        Seq next = from->rmw;
        if (next == to_seq) break;
        from = find(next);
    }
    insert_edge(*from, to_seq);
    if (merge(*to, *from)) propagate(to_seq);
}

void MoGraph::propagate(Seq start) {
    std::set<Seq> work{start};
    while (!work.empty()) {
        Node& node = *find(*work.begin());
        work.erase(work.begin());
        for (Seq dst : node.edges) {
            if (merge(*find(dst), node)) work.insert(dst);
        }
    }
}

void MoGraph::add_rmw_edge(Seq from_seq, Seq rmw_seq) {
    Node* from = find(from_seq);
    Node* rmw = find(rmw_seq);
    if (!from || !rmw) throw InvariantError("rmw edge between unknown nodes");
    if (from->rmw != kNoSeq) throw InvariantError("store " + std::to_string(from_seq) + " already read by an RMW");
    rmw_log_.emplace_back(from_seq, rmw_seq);
    requested_.emplace_back(from_seq, rmw_seq);
    from->rmw = rmw_seq;
    for (Seq dst : from->edges) {
        if (dst != rmw_seq) insert_edge(*rmw, dst);
    }
    from->edges.clear();
    add_edge_impl(from_seq, rmw_seq);
    // The merge above may leave the rmw clock unchanged, yet the migrated
    // targets have never seen it.
    propagate(rmw_seq);
}

void MoGraph::add_edges(const std::vector<Seq>& from_set, Seq to) {
    for (Seq e : from_set) add_edge(e, to);
}

bool MoGraph::reachable(Seq a, Seq b) const {
    if (a == b) return true;
    const Node* na = find(a);
    const Node* nb = find(b);
    if (!na || !nb) return false;
    if (na->loc != nb->loc) throw InvariantError("reachability query across locations");
    return leq(na->cv, nb->cv);
}

bool MoGraph::reachable_dfs(Seq a, Seq b) const {
    if (a == b) return true;
    std::vector<Seq> stack{a};
    std::set<Seq> seen{a};
    while (!stack.empty()) {
        const Node* n = find(stack.back());
        stack.pop_back();
        if (!n) continue;
        auto visit = [&](Seq next) {
            if (next == b) return true;
            if (seen.insert(next).second) stack.push_back(next);
            return false;
        };
        for (Seq next : n->edges) {
            if (visit(next)) return true;
        }
        if (n->rmw != kNoSeq && visit(n->rmw)) return true;
    }
    return false;
}

bool MoGraph::has_cycle() const {
    enum class Mark : std::uint8_t { White, Grey, Black };
    std::map<Seq, Mark> mark;
    for (const auto& [seq, _] : nodes_) mark[seq] = Mark::White;
    std::vector<std::pair<Seq, size_t>> stack;
    auto successors = [&](Seq s) {
        std::vector<Seq> out = find(s)->edges;
        if (Seq r = find(s)->rmw; r != kNoSeq) out.push_back(r);
        return out;
    };
    for (const auto& [root, _] : nodes_) {
        if (mark[root] != Mark::White) continue;
        mark[root] = Mark::Grey;
        stack.push_back({root, 0});
        while (!stack.empty()) {
            auto& [seq, i] = stack.back();
            auto succ = successors(seq);
            if (i == succ.size()) {
                mark[seq] = Mark::Black;
                stack.pop_back();
                continue;
            }
            Seq next = succ[i++];
            auto it = mark.find(next);
            if (it == mark.end()) continue;
            if (it->second == Mark::Grey) return true;
            if (it->second == Mark::White) {
                it->second = Mark::Grey;
                stack.push_back({next, 0});
            }
        }
    }
    return false;
}

void MoGraph::remove(Seq seq) {
    if (!nodes_.erase(seq)) return;
    for (auto& [_, n] : nodes_) {
        auto it = std::lower_bound(n.edges.begin(), n.edges.end(), seq);
        if (it != n.edges.end() && *it == seq) n.edges.erase(it);
        if (n.rmw == seq) n.rmw = kNoSeq;
    }
}

std::vector<Seq> MoGraph::nodes_at(LocId loc) const {
    std::vector<Seq> out;
    for (const auto& [seq, n] : nodes_) {
        if (n.loc == loc) out.push_back(seq);
    }
    return out;
}

std::string MoGraph::to_dot(const std::vector<std::string>& loc_names) const {
    std::ostringstream os;
    os << "digraph mo {\n";
    std::set<LocId> locs;
    for (const auto& [_, n] : nodes_) locs.insert(n.loc);
    for (LocId loc : locs) {
        std::string name = loc < loc_names.size() ? loc_names[loc] : "loc" + std::to_string(loc);
        os << "  subgraph cluster_" << loc << " {\n    label=\"" << name << "\";\n";
        for (Seq s : nodes_at(loc)) {
            const Node& n = *find(s);
            os << "    n" << s << " [label=\"" << n.tid << ":" << n.seq << "\"];\n";
        }
        os << "  }\n";
    }
    for (const auto& [s, n] : nodes_) {
        for (Seq d : n.edges) os << "  n" << s << " -> n" << d << ";\n";
        if (n.rmw != kNoSeq) os << "  n" << s << " -> n" << n.rmw << " [style=dashed];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace wmm
