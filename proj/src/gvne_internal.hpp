#pragma once

#include <vector>

#include "rarsched/job.hpp"
#include "rarsched/substrate.hpp"

namespace rarsched::gvne::detail {

// LP rows carry bandwidth in Gbps to keep coefficient magnitudes tame.
constexpr double kGbps = 1e9;

/// Servers whose full capacity admits at least one worker of the job.
inline std::vector<NodeId> admissible_servers(const Job& job, const SubstrateNetwork& net) {
    std::vector<NodeId> out;
    for (NodeId s : net.servers())
        if (job.demand.fits_within(net.node(s).capacity)) out.push_back(s);
    return out;
}

/// Largest number of the job's workers one server can host alone.
inline int max_colocated_workers(const Job& job, const SubstrateNetwork& net, NodeId server) {
    double cap = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < job.demand.size(); ++r)
        if (job.demand[r] > 0.0)
            cap = std::min(cap, net.node(server).capacity[r] / job.demand[r]);
    if (!std::isfinite(cap)) return 0;
    return static_cast<int>(cap + 1e-9);
}

}  // namespace rarsched::gvne::detail
