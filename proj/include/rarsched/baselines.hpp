#pragma once

#include <optional>

#include "rarsched/scheduler.hpp"

namespace rarsched::policy {

/// Residual capacities within one slot.
struct Residuals {
    std::vector<ResourceVector> node;  // per substrate node
    std::vector<double> edge_bps;

    static Residuals of(const SubstrateNetwork& net);
    void apply(const Embedding& emb, const Job& job, double sign);
};

/// Greedy ring placement used by every baseline: pack kappa workers onto
/// servers in descending residual-GPU order, then wire the used servers into
/// one directed cycle along shortest residual-bandwidth paths. Returns the
/// embedding and commits its resource use to `res`, or rejects.
std::optional<Embedding> greedy_place(const Job& job, int kappa, const SubstrateNetwork& net,
                                      Residuals& res);

class FifoPolicy : public SlotPolicy {
public:
    explicit FifoPolicy(int fixed_workers = 4);
    std::string name() const override { return "fifo"; }
    gvne::SlotResult allocate(int t, const std::vector<const Job*>& active,
                              const std::map<JobId, double>& z_prev, const SubstrateNetwork& net,
                              std::mt19937_64& rng) override;

private:
    int fixed_workers_;
};

class DrfPolicy : public SlotPolicy {
public:
    std::string name() const override { return "drf"; }
    gvne::SlotResult allocate(int t, const std::vector<const Job*>& active,
                              const std::map<JobId, double>& z_prev, const SubstrateNetwork& net,
                              std::mt19937_64& rng) override;
};

class LasPolicy : public SlotPolicy {
public:
    explicit LasPolicy(int fixed_workers = 4);
    std::string name() const override { return "las"; }
    gvne::SlotResult allocate(int t, const std::vector<const Job*>& active,
                              const std::map<JobId, double>& z_prev, const SubstrateNetwork& net,
                              std::mt19937_64& rng) override;

private:
    int fixed_workers_;
};

/// max_r allocated_r / cluster_r; the DRF priority key.
double dominant_share(const ResourceVector& allocated, const ResourceVector& cluster_total);

std::unique_ptr<SlotPolicy> make_policy(const std::string& name, const gvne::GvneConfig& cfg,
                                        int fixed_workers = 4);

}  // namespace rarsched::policy
