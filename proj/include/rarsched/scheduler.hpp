#pragma once

#include <memory>
#include <string>

#include "rarsched/gvne.hpp"

namespace rarsched::policy {

/// Jobs that have arrived and still have worker-time budget left:
/// I[t] = {i : t >= a_i and z_{i,t-1} < min_r F_i^r / l_i^r}.
std::vector<const Job*> active_set(int t, const std::vector<Job>& jobs,
                                   const std::map<JobId, double>& z_prev);

/// One slot's allocation decision. Implementations are pure per-slot
/// functions of (t, active jobs, accumulators, network, rng).
class SlotPolicy {
public:
    virtual ~SlotPolicy() = default;
    virtual std::string name() const = 0;
    virtual gvne::SlotResult allocate(int t, const std::vector<const Job*>& active,
                                      const std::map<JobId, double>& z_prev,
                                      const SubstrateNetwork& net, std::mt19937_64& rng) = 0;
};

/// The LP-based ring-selection and embedding pipeline.
class GadgetPolicy : public SlotPolicy {
public:
    explicit GadgetPolicy(gvne::GvneConfig cfg = {}) : cfg_(cfg) {}
    std::string name() const override { return "gadget"; }
    gvne::SlotResult allocate(int t, const std::vector<const Job*>& active,
                              const std::map<JobId, double>& z_prev, const SubstrateNetwork& net,
                              std::mt19937_64& rng) override;

private:
    gvne::GvneConfig cfg_;
};

struct RunResult {
    Schedule schedule;
    std::vector<gvne::SlotDiagnostics> diagnostics;  // parallel to schedule slots
    std::vector<int> active_count;                   // |I[t]| per slot
    std::vector<int> embedded_count;                 // embedded jobs per slot
    double objective = 0.0;                          // F at the horizon
};

/// Algorithm: for t = 1..T compute the active set, solve the slot with the
/// policy, record the allocation and update z. Slot failures leave that slot
/// empty and the run continues.
RunResult run_online(const std::vector<Job>& trace, const SubstrateNetwork& net, int horizon,
                     SlotPolicy& policy, std::uint64_t seed);

/// F(schedule) = sum_i mu_i(zeta_i * z_{i,T}).
double objective(const Schedule& schedule, const std::vector<Job>& jobs);

/// A ground-set element for the temporal objective: one candidate allocation
/// in one slot, reduced to per-job worker totals.
struct SlotElement {
    int t = 0;
    std::map<JobId, int> workers;
};

/// F over an arbitrary element set (elements in the same slot stack), used by
/// the diminishing-returns property checks.
double set_objective(const std::vector<SlotElement>& elements, const std::vector<Job>& jobs);

/// Deterministic per-slot RNG stream derived from the run seed.
std::mt19937_64 slot_rng(std::uint64_t seed, int t);

}  // namespace rarsched::policy
