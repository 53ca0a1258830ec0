#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "rarsched/allocation.hpp"
#include "rarsched/job.hpp"
#include "rarsched/lp.hpp"
#include "rarsched/substrate.hpp"
#include "rarsched/validate.hpp"

namespace rarsched::gvne {

/// A job participating in one time slot, with its accumulated worker-time.
struct ActiveJob {
    const Job* job = nullptr;
    double z_prev = 0.0;
};

/// Per-time-slot embedding instance.
struct GvneInstance {
    int t = 1;
    std::vector<ActiveJob> jobs;
    const SubstrateNetwork* net = nullptr;
};

struct GvneConfig {
    double epsilon = 0.5;      // violation-factor scaling
    int rounding_rounds = 100; // u_b
    double alpha = 1.0 / 3.0;  // rounding acceptance fraction of the LP objective
    int anchor_copy_cap = 6;   // max anchored copies per job in the augmented LP (0 = all servers)
    double feas_tol = 1e-6;
    lp::SimplexOptions lp_options{};
};

// ---------------------------------------------------------------------------
// Ring-size candidates

/// Upper bound q_i[t] on the worker count: min of N_i, the remaining
/// worker-time budget, and the single-job continuous capacity share
/// sum_s min_r C_s^r / l_i^r. Throws std::domain_error for inactive jobs.
double worker_upper_bound(const Job& job, double z_prev, const SubstrateNetwork& net);

/// Q_i[t] = {1..ceil(q_i)} intersected with the exact budget headroom, so a
/// chosen ring can never overdraw the worker-time budget.
std::vector<int> candidate_ring_sizes(const Job& job, double z_prev, const SubstrateNetwork& net);

/// pi_{i,kappa} = mu(zeta (z + kappa)) - mu(zeta z).
double incremental_utility(const Job& job, double z_prev, int kappa);

// ---------------------------------------------------------------------------
// Ring-size selection ILP (relaxed)

/// Carrier for the per-slot embedding program: ring choice variables
/// chi_{i,kappa}, node maps, unit flows per virtual edge, cumulative node and
/// edge loads, and the shared capacity rows. Binaries are relaxed to [0,1].
struct IlpModel {
    struct JobBlock {
        JobId job = -1;
        int rho = -1;
        std::vector<NodeId> candidate_servers;            // capacity-admissible hosts
        std::vector<int> ring_sizes;                      // Q_i
        std::vector<double> pi;                           // per ring size
        std::vector<int> chi;                             // per ring size
        // node_map[k][a][ci]: ring_sizes[k], virtual node a, candidate index ci
        std::vector<std::vector<std::vector<int>>> node_map;
        // flow[k][a][e]: virtual edge (a, a+1 mod kappa), substrate edge e
        std::vector<std::vector<std::vector<int>>> flow;
        std::vector<std::vector<int>> node_load;          // h[ci][r]
        std::vector<int> edge_load;                       // o[e]
    };
    lp::LinearProgram lp;
    std::vector<JobBlock> blocks;
    std::vector<JobId> excluded;  // jobs with no candidate ring size or host
};

IlpModel build_ilp(const GvneInstance& inst);

struct RingSelection {
    std::map<JobId, int> kappa;       // chosen ring size for jobs with rho_bar > 0
    std::map<JobId, double> rho_bar;
};

/// kappa_i = argmax_{kappa: chi_bar > 0} pi * chi_bar (ties to the smaller
/// ring); jobs with rho_bar ~ 0 are rejected for the slot.
RingSelection select_ring_sizes(const lp::LpSolution& sol, const IlpModel& model);

// ---------------------------------------------------------------------------
// Augmented LP: anchored copies remove the cyclic-embedding ambiguity of
// fractional ring flows.

struct AugmentedModel {
    struct Copy {
        NodeId anchor = -1;                        // server hosting virtual node 0
        int weight = -1;                           // copy-weight variable psi
        std::vector<std::vector<int>> node_map;    // [a-1][candidate index], a in 1..kappa-1
        std::vector<std::vector<int>> flow;        // [virtual edge a][substrate edge]
    };
    struct JobBlock {
        JobId job = -1;
        const Job* job_ref = nullptr;
        int kappa = 1;
        double pi = 0.0;
        double z_prev = 0.0;
        int rho = -1;
        std::vector<NodeId> candidate_servers;
        std::vector<Copy> copies;
    };
    const SubstrateNetwork* net = nullptr;
    lp::LinearProgram lp;
    std::vector<JobBlock> blocks;
};

AugmentedModel build_augmented_lp(const GvneInstance& inst, const RingSelection& sel,
                                  const GvneConfig& cfg);

// ---------------------------------------------------------------------------
// Decomposition into mapping-selection tuples

struct MappingTuple {
    double phi = 0.0;
    Embedding embedding;
};

struct MappingSelection {
    JobId job = -1;
    double pi = 0.0;
    double rho_bar = 0.0;
    std::vector<MappingTuple> tuples;   // sum phi <= rho_bar + tol
    double truncated_mass = 0.0;        // LP mass lost to decomposition stalls
};

/// Iterative flow decomposition of the augmented-LP solution. Every returned
/// embedding is integral, capacity-admissible per node, and ring-valid.
std::vector<MappingSelection> decompose(const lp::LpSolution& sol, const AugmentedModel& model,
                                        double feas_tol = 1e-6);

// ---------------------------------------------------------------------------
// Violation factors (rounding capacity slack)

struct ViolationFactors {
    double epsilon = 0.0;
    std::vector<double> beta;        // per resource type, >= 1
    double gamma_edge = 1.0;
    std::vector<double> delta_node;  // per resource type
    double delta_edge = 0.0;

    CapacityMultipliers multipliers() const { return {beta, gamma_edge}; }
    static ViolationFactors strict(std::size_t resource_count);
};

/// beta^r = 1 + eps * sqrt(2 Delta^r ln |V_s|) and the edge analogue, with
/// the Delta constants taken over the instance's jobs. Requires at least
/// three servers.
ViolationFactors violation_factors(const GvneInstance& inst, double epsilon);

// ---------------------------------------------------------------------------
// Randomized rounding

struct RoundingReport {
    int rounds_used = 0;
    bool accepted = false;
    double achieved_utility = 0.0;
    double target_utility = 0.0;
    std::vector<Violation> violations;  // of the returned round vs beta/gamma limits
};

/// Draws one mapping per job per round (job i keeps tuple k with probability
/// phi_i^k, rejected otherwise) until a round clears alpha * lp_objective in
/// utility within the relaxed capacities, or max_rounds is exhausted, in
/// which case the best round seen by utility is returned with its violations
/// reported.
SlotAllocation randomized_round(const std::vector<MappingSelection>& selections,
                                const GvneInstance& inst, const ViolationFactors& factors,
                                double alpha, double lp_objective, int max_rounds,
                                std::mt19937_64& rng, RoundingReport* report = nullptr);

// ---------------------------------------------------------------------------
// Exact small-instance oracle

struct OracleLimits {
    int max_jobs = 3;
    int max_servers = 5;
    int max_kappa = 4;
};

struct OracleResult {
    double utility = 0.0;
    SlotAllocation alloc;
};

/// Exhaustive search over per-job ring sizes, host sequences and simple edge
/// routes with capacity pruning; the true integral optimum of the slot
/// program. Refuses instances beyond the limits.
OracleResult exact_oracle(const GvneInstance& inst, const OracleLimits& limits = {});

// ---------------------------------------------------------------------------
// End-to-end per-slot solve

struct SlotDiagnostics {
    double ilp_objective = 0.0;
    double augmented_objective = 0.0;
    double utility = 0.0;                  // sum of pi over embedded jobs
    std::map<JobId, double> q_upper;
    std::map<JobId, int> selected_kappa;
    std::vector<JobId> excluded;
    int rounds_used = 0;
    bool accepted = false;
    int dropped_jobs = 0;                  // removed to restore relaxed capacities
    ViolationFactors factors;
    std::vector<Violation> violations;     // residual violations (empty by construction)
    std::vector<std::string> notes;
};

struct SlotResult {
    SlotAllocation alloc;
    SlotDiagnostics diag;
};

/// worker_upper_bound -> build_ilp -> solve -> select_ring_sizes ->
/// build_augmented_lp -> solve -> decompose -> randomized_round. Stage
/// failures degrade to empty allocations for the affected jobs and are noted
/// in the diagnostics. The returned allocation always satisfies the
/// (beta, gamma)-relaxed capacities and the exact budget headroom.
SlotResult solve_slot(const GvneInstance& inst, const GvneConfig& cfg, std::mt19937_64& rng);

}  // namespace rarsched::gvne
