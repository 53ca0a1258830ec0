#pragma once

#include "rarsched/cluster_gen.hpp"
#include "rarsched/runlog.hpp"
#include "rarsched/trace.hpp"

namespace rarsched::sim {

struct ExperimentConfig {
    ClusterSpec cluster;
    TraceSpec trace;
    gvne::GvneConfig gvne;
    int fixed_workers = 4;
    std::vector<std::string> policies = {"gadget", "fifo", "drf", "las"};
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    std::string out_dir;    // empty = no files written
    int threads = 0;        // 0 = hardware concurrency
    bool save_logs = true;  // emit one run log per (policy, seed)
};

struct UtilityRow {
    std::string policy;
    int jobs = 0;
    std::uint64_t seed = 0;
    double total_utility = 0.0;
};

struct RatioRow {
    std::string sweep;  // "node" or "edge"
    double multiplier = 1.0;
    std::uint64_t seed = 0;
    double embedded_ratio = 0.0;
};

struct ApproxRow {
    std::uint64_t seed = 0;
    int slot = 1;
    double gadget_utility = 0.0;
    double oracle_utility = 0.0;
    double ratio = 1.0;
    bool accepted = false;
};

/// One policy, one seed, one full horizon.
RunLog single_run(const SubstrateNetwork& net, const std::vector<Job>& jobs,
                  const std::string& policy, int horizon, std::uint64_t seed,
                  const gvne::GvneConfig& gvne_cfg, int fixed_workers);

/// Per-slot embedded/active averaged over slots with active jobs.
double mean_embedded_ratio(const policy::RunResult& run);

/// Total utility per policy on the shared scenario (one CSV line per run).
std::vector<UtilityRow> run_utility_scenario(const ExperimentConfig& cfg);

/// Embedded ratio across a 4-point capacity sweep. Node sweeps scale server
/// capacities; edge sweeps scale a bandwidth-tight variant of the fabric.
std::vector<RatioRow> run_capacity_sweep(const ExperimentConfig& cfg, const std::string& which);

/// Small seeded single-slot instances solved by both the embedding pipeline
/// and the exhaustive oracle.
std::vector<ApproxRow> run_approx_scenario(const ExperimentConfig& cfg);

struct SmallInstance {
    SubstrateNetwork net;
    std::vector<Job> jobs;
};

/// Oracle-sized instance: 3..5 servers, 1..3 jobs, ring sizes <= 4.
SmallInstance make_small_instance(std::uint64_t seed);

/// Spearman rank correlation with average ranks for ties; a constant series
/// counts as perfectly correlated (flat-at-max sweeps are nondecreasing).
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

void write_utility_csv(const std::string& path, const std::vector<UtilityRow>& rows);
void write_ratio_csv(const std::string& path, const std::vector<RatioRow>& rows);
void write_approx_csv(const std::string& path, const std::vector<ApproxRow>& rows);

}  // namespace rarsched::sim
