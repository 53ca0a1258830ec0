#pragma once

#include <map>
#include <optional>
#include <vector>

#include "rarsched/ring.hpp"

namespace rarsched {

/// Worker counts y_{is} and server-use indicators x_{is} materialized from
/// an embedding.
struct ServerCounts {
    std::map<NodeId, int> workers;  // y: worker multiplicity per server
    std::map<NodeId, int> used;     // x: 1 where workers >= 1
};

ServerCounts derive_counts(const Embedding& emb);

/// One time slot's allocation: at most one embedding per job.
struct SlotAllocation {
    int t = 0;
    std::map<JobId, Embedding> embeddings;

    bool empty() const { return embeddings.empty(); }
    const Embedding* embedding_of(JobId j) const {
        auto it = embeddings.find(j);
        return it == embeddings.end() ? nullptr : &it->second;
    }
    /// Total workers of job j in this slot (0 when not embedded).
    int workers_of(JobId j) const {
        const Embedding* e = embedding_of(j);
        return e ? e->kappa : 0;
    }
};

/// A full schedule over the horizon, with the accumulators z_{i,t}.
class Schedule {
public:
    void append(SlotAllocation alloc) { slots_.push_back(std::move(alloc)); }

    const std::vector<SlotAllocation>& slots() const { return slots_; }
    std::size_t horizon() const { return slots_.size(); }

    /// z_{i,t}: cumulative worker-time of job j through slot t (1-based);
    /// t = 0 gives 0.
    double accumulated(JobId j, int t) const {
        double z = 0.0;
        for (int k = 0; k < t && k < static_cast<int>(slots_.size()); ++k)
            z += slots_[k].workers_of(j);
        return z;
    }

    double final_accumulated(JobId j) const { return accumulated(j, static_cast<int>(slots_.size())); }

    /// First slot where the worker-time budget binds, if any.
    std::optional<int> completion_slot(const Job& job) const {
        const double budget = job.worker_time_budget();
        double z = 0.0;
        for (std::size_t k = 0; k < slots_.size(); ++k) {
            z += slots_[k].workers_of(job.id);
            if (z >= budget) return static_cast<int>(k) + 1;
        }
        return std::nullopt;
    }

private:
    std::vector<SlotAllocation> slots_;
};

}  // namespace rarsched
