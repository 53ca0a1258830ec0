#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rarsched/resources.hpp"

namespace rarsched {

using NodeId = int;
using EdgeId = int;

enum class NodeKind { Server, Switch };

struct SubstrateNode {
    NodeId id = -1;
    NodeKind kind = NodeKind::Server;
    ResourceVector capacity;  // all-zero for switches
    int rack = -1;            // rack label for servers, -1 otherwise
    std::string name;
};

/// One direction of a physical link. Every physical link is represented
/// by two directed edges.
struct SubstrateEdge {
    EdgeId id = -1;
    NodeId from = -1;
    NodeId to = -1;
    double bandwidth_bps = 0.0;
};

/// Directed graph of servers, switches and links with multi-dimensional
/// node capacities and per-edge bandwidths.
class SubstrateNetwork {
public:
    SubstrateNetwork() = default;
    explicit SubstrateNetwork(ResourceRegistry reg) : registry_(std::move(reg)) {}

    const ResourceRegistry& registry() const { return registry_; }

    NodeId add_server(ResourceVector capacity, int rack = -1, std::string name = {});
    NodeId add_switch(std::string name = {});
    /// Adds a single directed edge.
    EdgeId add_edge(NodeId from, NodeId to, double bandwidth_bps);
    /// Adds both directions with the same bandwidth.
    void add_link(NodeId a, NodeId b, double bandwidth_bps);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const SubstrateNode& node(NodeId u) const { return nodes_.at(u); }
    const SubstrateEdge& edge(EdgeId e) const { return edges_.at(e); }
    const std::vector<SubstrateNode>& nodes() const { return nodes_; }
    const std::vector<SubstrateEdge>& edges() const { return edges_; }

    const std::vector<NodeId>& servers() const { return servers_; }
    std::size_t server_count() const { return servers_.size(); }

    const std::vector<EdgeId>& out_edges(NodeId u) const { return out_.at(u); }
    const std::vector<EdgeId>& in_edges(NodeId u) const { return in_.at(u); }

    /// Edge id for (from, to), or -1 if absent.
    EdgeId find_edge(NodeId from, NodeId to) const;

    bool is_server(NodeId u) const { return nodes_.at(u).kind == NodeKind::Server; }

    /// Checks structural invariants: nonnegative capacities, switches with
    /// all-zero capacity, strong connectivity (when more than one node).
    /// Throws std::invalid_argument describing the first failure.
    void validate() const;

    /// Returns a copy with node capacities scaled by `node_mul` and edge
    /// bandwidths scaled by `edge_mul` (used by capacity sweeps).
    SubstrateNetwork scaled(double node_mul, double edge_mul) const;

private:
    ResourceRegistry registry_;
    std::vector<SubstrateNode> nodes_;
    std::vector<SubstrateEdge> edges_;
    std::vector<NodeId> servers_;
    std::vector<std::vector<EdgeId>> out_;
    std::vector<std::vector<EdgeId>> in_;
    std::map<std::pair<NodeId, NodeId>, EdgeId> edge_index_;
};

}  // namespace rarsched
