#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rarsched/job.hpp"

namespace rarsched::sim {

/// Synthetic trace generator settings (defaults follow the evaluation setup:
/// integer parameters drawn uniformly from these intervals, sigmoid utility).
struct TraceSpec {
    int jobs = 40;
    int horizon = 50;
    double arrival_span = 0.7;        // arrivals land in [1, span * horizon]
    std::string arrival = "poisson";  // "poisson" or "uniform"
    int n_min = 1, n_max = 5;
    double budget_min = 1000, budget_max = 6000;  // F (worker-time, GPU-denominated)
    double zeta_min = 50, zeta_max = 500;
    double bw_min = 100e6, bw_max = 5e9;  // bits/sec
    double l1_min = 1, l1_max = 100;      // sigmoid amplitude
    double l2_min = 0.01, l2_max = 0.99;  // sigmoid sensitivity, inside (0,1)
    double l3_min = 300, l3_max = 3000;   // sigmoid midpoint
    int gpu_per_worker = 1;
    int mem_per_worker_max = 8;  // per-worker memory demand drawn from [1, max]
    // "sigmoid" draws the l1/l2/l3 ranges above; "sqrt" draws C in [1, 10] and
    // never saturates, which keeps capacity sweeps busy; "log" is parameterless.
    std::string utility_kind = "sigmoid";
    std::uint64_t seed = 1;

    void validate() const;
};

std::vector<Job> generate_trace(const TraceSpec& spec, const ResourceRegistry& reg);

struct TraceLoadReport {
    std::vector<std::string> warnings;  // clamped out-of-range fields, one line each
};

/// Loads the flat comma-separated trace format (header row required):
///   id,arrival,N,l_gpu,l_mem,F_gpu,F_mem,bandwidth_bps,zeta,utility_kind,utility_params...
/// Malformed records raise std::runtime_error naming the line. When `ranges`
/// is given, out-of-range fields are clamped into it with a recorded warning.
std::vector<Job> load_trace(const std::string& path, const ResourceRegistry& reg,
                            TraceLoadReport* report = nullptr,
                            const std::optional<TraceSpec>& ranges = std::nullopt);

void write_trace(const std::string& path, const std::vector<Job>& jobs,
                 const ResourceRegistry& reg);

}  // namespace rarsched::sim
