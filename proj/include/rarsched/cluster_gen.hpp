#pragma once

#include <cstdint>
#include <vector>

#include "rarsched/substrate.hpp"

namespace rarsched::sim {

/// Two-level fat-tree generator: servers under rack switches under one core
/// switch. Bandwidths in bits/sec.
struct ClusterSpec {
    int servers = 10;
    int rack_min = 2;
    int rack_max = 5;
    std::vector<int> gpu_choices = {1, 2, 4, 8};
    double server_rack_bw_min = 10e9;
    double server_rack_bw_max = 100e9;
    double rack_core_bw_min = 200e9;
    double rack_core_bw_max = 3200e9;
    int mem_per_gpu = 8;    // memory units per GPU
    bool gpu_only = false;  // drop the memory resource dimension
    std::uint64_t seed = 1;

    void validate() const;
};

SubstrateNetwork generate_cluster(const ClusterSpec& spec);

}  // namespace rarsched::sim
