#include "rarsched/substrate.hpp"

#include <queue>
#include <stdexcept>

namespace rarsched {

NodeId SubstrateNetwork::add_server(ResourceVector capacity, int rack, std::string name) {
    if (capacity.size() != registry_.size())
        throw std::invalid_argument("server capacity does not match resource registry");
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back({id, NodeKind::Server, std::move(capacity), rack,
                      name.empty() ? "server" + std::to_string(id) : std::move(name)});
    servers_.push_back(id);
    out_.emplace_back();
    in_.emplace_back();
    return id;
}

NodeId SubstrateNetwork::add_switch(std::string name) {
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back({id, NodeKind::Switch, ResourceVector(registry_.size(), 0.0), -1,
                      name.empty() ? "switch" + std::to_string(id) : std::move(name)});
    out_.emplace_back();
    in_.emplace_back();
    return id;
}

EdgeId SubstrateNetwork::add_edge(NodeId from, NodeId to, double bandwidth_bps) {
    if (from < 0 || to < 0 || from >= static_cast<NodeId>(nodes_.size()) ||
        to >= static_cast<NodeId>(nodes_.size()))
        throw std::invalid_argument("edge endpoint out of range");
    if (from == to) throw std::invalid_argument("self-loop edges are not allowed");
    EdgeId id = static_cast<EdgeId>(edges_.size());
    edges_.push_back({id, from, to, bandwidth_bps});
    out_[from].push_back(id);
    in_[to].push_back(id);
    edge_index_[{from, to}] = id;
    return id;
}

void SubstrateNetwork::add_link(NodeId a, NodeId b, double bandwidth_bps) {
    add_edge(a, b, bandwidth_bps);
    add_edge(b, a, bandwidth_bps);
}

EdgeId SubstrateNetwork::find_edge(NodeId from, NodeId to) const {
    auto it = edge_index_.find({from, to});
    return it == edge_index_.end() ? -1 : it->second;
}

void SubstrateNetwork::validate() const {
    for (const auto& n : nodes_) {
        if (!n.capacity.all_nonnegative())
            throw std::invalid_argument("negative capacity on node " + n.name);
        if (n.kind == NodeKind::Switch && !n.capacity.all_zero())
            throw std::invalid_argument("switch " + n.name + " has nonzero capacity");
    }
    for (const auto& e : edges_) {
        if (e.bandwidth_bps < 0.0)
            throw std::invalid_argument("negative bandwidth on edge " + std::to_string(e.id));
    }
    if (nodes_.size() <= 1) return;

    // Strong connectivity: BFS forward and backward from node 0.
    auto reach = [&](bool forward) {
        std::vector<char> seen(nodes_.size(), 0);
        std::queue<NodeId> q;
        q.push(0);
        seen[0] = 1;
        std::size_t count = 1;
        while (!q.empty()) {
            NodeId u = q.front();
            q.pop();
            for (EdgeId e : forward ? out_[u] : in_[u]) {
                NodeId v = forward ? edges_[e].to : edges_[e].from;
                if (!seen[v]) {
                    seen[v] = 1;
                    ++count;
                    q.push(v);
                }
            }
        }
        return count;
    };
    if (reach(true) != nodes_.size() || reach(false) != nodes_.size())
        throw std::invalid_argument("substrate graph is not strongly connected");
}

SubstrateNetwork SubstrateNetwork::scaled(double node_mul, double edge_mul) const {
    SubstrateNetwork out(*this);
    for (auto& n : out.nodes_)
        if (n.kind == NodeKind::Server) n.capacity = n.capacity.scaled(node_mul);
    for (auto& e : out.edges_) e.bandwidth_bps *= edge_mul;
    return out;
}

}  // namespace rarsched
