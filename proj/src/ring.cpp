#include "rarsched/ring.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace rarsched {

void Embedding::validate_structure(const SubstrateNetwork& net) const {
    if (kappa < 1) throw std::invalid_argument("embedding with kappa < 1");
    if (static_cast<int>(hosts.size()) != kappa)
        throw std::invalid_argument("embedding host map size != kappa");
    for (NodeId h : hosts) {
        if (h < 0 || h >= static_cast<NodeId>(net.node_count()))
            throw std::invalid_argument("embedding host out of range");
        if (!net.is_server(h))
            throw std::invalid_argument("embedding maps a worker to a switch");
    }
    if (kappa == 1) {
        if (!paths.empty() && !(paths.size() == 1 && paths[0].empty()))
            throw std::invalid_argument("kappa=1 embedding must have no paths");
        return;
    }
    if (static_cast<int>(paths.size()) != kappa)
        throw std::invalid_argument("embedding path map size != ring edge count");
    for (int a = 0; a < kappa; ++a) {
        const NodeId from = hosts[a];
        const NodeId to = hosts[(a + 1) % kappa];
        const auto& path = paths[a];
        if (from == to) {
            if (!path.empty())
                throw std::invalid_argument("co-located ring hop must use an empty path");
            continue;
        }
        if (path.empty())
            throw std::invalid_argument("inter-server ring hop with empty path");
        NodeId at = from;
        std::set<EdgeId> seen;
        for (EdgeId e : path) {
            if (e < 0 || e >= static_cast<EdgeId>(net.edge_count()))
                throw std::invalid_argument("path references unknown edge");
            if (!seen.insert(e).second)
                throw std::invalid_argument("path repeats a substrate edge");
            if (net.edge(e).from != at)
                throw std::invalid_argument("path hop " + std::to_string(e) + " does not continue from previous node");
            at = net.edge(e).to;
        }
        if (at != to) throw std::invalid_argument("path does not end at the next worker's host");
    }
}

}  // namespace rarsched
