#pragma once

#include <string>

#include "rarsched/baselines.hpp"
#include "rarsched/scheduler.hpp"

namespace rarsched::sim {

/// Everything needed to replay and audit a run: configuration, the full
/// cluster and job set, and the per-slot allocations with diagnostics.
struct RunLog {
    std::string policy = "gadget";
    std::uint64_t seed = 1;
    int horizon = 0;
    double epsilon = 0.5;
    int rounding_rounds = 100;
    double alpha = 1.0 / 3.0;
    int fixed_workers = 4;
    bool gpu_only = false;

    SubstrateNetwork net;
    std::vector<Job> jobs;
    policy::RunResult result;
};

void save_runlog(const std::string& path, const RunLog& log);
RunLog load_runlog(const std::string& path);

/// Cluster file format: JSON with the resource registry, nodes (kind,
/// capacity, rack) and directed edges. The same schema the run log embeds.
void save_cluster(const std::string& path, const SubstrateNetwork& net);
SubstrateNetwork load_cluster(const std::string& path);

struct AuditReport {
    bool ok = true;
    std::vector<std::string> errors;
    int slots_checked = 0;
};

/// Replays the accumulators and re-validates every slot against the recorded
/// violation factors, re-checks ring validity, and audits the worker-time
/// budget exactly (no relaxation on budgets, ever).
AuditReport audit_runlog(const RunLog& log);

}  // namespace rarsched::sim
