#include "rarsched/scheduler.hpp"

namespace rarsched::policy {

std::vector<const Job*> active_set(int t, const std::vector<Job>& jobs,
                                   const std::map<JobId, double>& z_prev) {
    if (t < 1) throw std::invalid_argument("slots are 1-based");
    std::vector<const Job*> active;
    for (const Job& j : jobs) {
        if (t < j.arrival) continue;
        double z = 0.0;
        if (auto it = z_prev.find(j.id); it != z_prev.end()) z = it->second;
        if (z < j.worker_time_budget()) active.push_back(&j);
    }
    return active;
}

gvne::SlotResult GadgetPolicy::allocate(int t, const std::vector<const Job*>& active,
                                        const std::map<JobId, double>& z_prev,
                                        const SubstrateNetwork& net, std::mt19937_64& rng) {
    gvne::GvneInstance inst;
    inst.t = t;
    inst.net = &net;
    for (const Job* j : active) {
        double z = 0.0;
        if (auto it = z_prev.find(j->id); it != z_prev.end()) z = it->second;
        inst.jobs.push_back({j, z});
    }
    return gvne::solve_slot(inst, cfg_, rng);
}

std::mt19937_64 slot_rng(std::uint64_t seed, int t) {
    // splitmix64 over (seed, t) so slots draw independent, reproducible streams.
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(t + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return std::mt19937_64(x);
}

RunResult run_online(const std::vector<Job>& trace, const SubstrateNetwork& net, int horizon,
                     SlotPolicy& policy, std::uint64_t seed) {
    RunResult run;
    std::map<JobId, double> z;
    for (const Job& j : trace) z[j.id] = 0.0;

    for (int t = 1; t <= horizon; ++t) {
        auto active = active_set(t, trace, z);
        std::mt19937_64 rng = slot_rng(seed, t);
        gvne::SlotResult slot;
        try {
            slot = policy.allocate(t, active, z, net, rng);
        } catch (const std::exception& e) {
            slot.alloc = SlotAllocation{};
            slot.diag.notes.push_back(std::string("slot solver failure: ") + e.what());
        }
        slot.alloc.t = t;

        int embedded = 0;
        for (const auto& [jid, emb] : slot.alloc.embeddings) {
            z[jid] += emb.kappa;
            ++embedded;
        }
        run.active_count.push_back(static_cast<int>(active.size()));
        run.embedded_count.push_back(embedded);
        run.schedule.append(std::move(slot.alloc));
        run.diagnostics.push_back(std::move(slot.diag));
    }
    run.objective = objective(run.schedule, trace);
    return run;
}

double objective(const Schedule& schedule, const std::vector<Job>& jobs) {
    double f = 0.0;
    for (const Job& j : jobs) f += j.utility_at(schedule.final_accumulated(j.id));
    return f;
}

double set_objective(const std::vector<SlotElement>& elements, const std::vector<Job>& jobs) {
    std::map<JobId, double> z;
    for (const auto& el : elements)
        for (const auto& [jid, w] : el.workers) z[jid] += w;
    double f = 0.0;
    for (const Job& j : jobs) {
        double zj = 0.0;
        if (auto it = z.find(j.id); it != z.end()) zj = it->second;
        f += j.utility_at(zj);
    }
    return f;
}

}  // namespace rarsched::policy
