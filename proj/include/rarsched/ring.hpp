#pragma once

#include <utility>
#include <vector>

#include "rarsched/job.hpp"
#include "rarsched/substrate.hpp"

namespace rarsched {

/// The kappa-worker directed ring request graph of a job: nodes 0..kappa-1,
/// edges (a, (a+1) mod kappa), uniform node demand l_i and edge demand b_i.
struct RingRequest {
    JobId job = -1;
    int kappa = 1;
    ResourceVector node_demand;  // per virtual node
    double edge_demand_bps = 0.0;

    static RingRequest of(const Job& j, int kappa) {
        if (kappa < 1) throw std::invalid_argument("ring size must be >= 1");
        return RingRequest{j.id, kappa, j.demand, j.bandwidth_bps};
    }

    /// Directed ring edges; empty for kappa == 1.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> e;
        if (kappa >= 2)
            for (int a = 0; a < kappa; ++a) e.emplace_back(a, (a + 1) % kappa);
        return e;
    }
};

/// An integral embedding of a ring request: virtual node a -> hosting server,
/// virtual edge (a, a+1) -> simple directed substrate path. The path is empty
/// when both endpoints are co-located.
struct Embedding {
    JobId job = -1;
    int kappa = 0;
    std::vector<NodeId> hosts;               // size kappa, servers only
    std::vector<std::vector<EdgeId>> paths;  // size kappa for kappa >= 2, else empty

    /// Structural invariants: hosts are servers, paths connect consecutive
    /// hosts, each path is simple, co-located hops have empty paths.
    /// Throws std::invalid_argument on the first failure.
    void validate_structure(const SubstrateNetwork& net) const;
};

}  // namespace rarsched
