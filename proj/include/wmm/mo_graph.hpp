#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wmm/clock_vector.hpp"
#include "wmm/types.hpp"

namespace wmm {

/// Per-location modification-order constraint graph. Reachability is answered
/// by comparing per-node clock vectors, so no cycle ever has to be rolled back.
/// Nodes are keyed by the writing event's sequence number.
class MoGraph {
public:
    struct Node {
        Seq seq = kNoSeq;
        Tid tid = 0;
        LocId loc = 0;
        ClockVector cv;
        std::vector<Seq> edges;  // sorted
        Seq rmw = kNoSeq;        // RMW that read from this node, if any
    };

    /// Returns the node for a store, creating it with cv = bottom(tid, seq).
    Node& get_node(Seq seq, Tid tid, LocId loc);

    const Node* find(Seq seq) const;
    Node* find(Seq seq);
    bool contains(Seq seq) const { return nodes_.contains(seq); }
    size_t size() const { return nodes_.size(); }

    /// dst.cv := dst.cv ∪ src.cv unless src.cv <= dst.cv already.
    static bool merge(Node& dst, const Node& src);

    void add_edge(Seq from, Seq to);
    void add_rmw_edge(Seq from, Seq rmw);
    void add_edges(const std::vector<Seq>& from_set, Seq to);

    /// True iff b is reachable from a (a == b counts).
    bool reachable(Seq a, Seq b) const;

    /// Explicit graph search over mo and rmw edges; reference for reachable().
    bool reachable_dfs(Seq a, Seq b) const;
    bool has_cycle() const;

    /// Drops a node and every edge into it.
    void remove(Seq seq);

    std::vector<Seq> nodes_at(LocId loc) const;
    const std::map<Seq, Node>& nodes() const { return nodes_; }

    /// Every edge requested through add_edge/add_rmw_edge, in call order,
    /// before redundancy elimination or rmw-chain redirection.
    const std::vector<std::pair<Seq, Seq>>& requested_edges() const { return requested_; }
    const std::vector<std::pair<Seq, Seq>>& rmw_edges() const { return rmw_log_; }

    /// DOT rendering, one cluster per location. rmw edges are dashed.
    std::string to_dot(const std::vector<std::string>& loc_names = {}) const;

private:
    void insert_edge(Node& from, Seq to);
    void add_edge_impl(Seq from, Seq to);
    void propagate(Seq start);

    std::map<Seq, Node> nodes_;
    std::vector<std::pair<Seq, Seq>> requested_;
    std::vector<std::pair<Seq, Seq>> rmw_log_;
};

}  // namespace wmm
