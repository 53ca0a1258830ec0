#include "rarsched/gvne.hpp"

#include <algorithm>

#include "gvne_internal.hpp"

namespace rarsched::gvne {

namespace {

// Loads of an allocation against beta/gamma-relaxed capacities; empties the
// cheapest embedded jobs until the relaxed rows hold. Returns the violations
// of the allocation as handed in (before any drop).
int drop_until_relaxed_feasible(SlotAllocation& alloc, const GvneInstance& inst,
                                const ViolationFactors& factors) {
    const SubstrateNetwork& net = *inst.net;
    std::map<JobId, const Job*> jobs;
    std::map<JobId, double> z_prev;
    for (const auto& aj : inst.jobs) {
        jobs[aj.job->id] = aj.job;
        z_prev[aj.job->id] = aj.z_prev;
    }
    int dropped = 0;
    while (true) {
        std::vector<std::vector<double>> node_load(net.node_count(),
                                                   std::vector<double>(net.registry().size(), 0.0));
        std::vector<double> edge_load(net.edge_count(), 0.0);
        for (const auto& [jid, emb] : alloc.embeddings) {
            const Job& job = *jobs.at(jid);
            for (NodeId h : emb.hosts)
                for (std::size_t r = 0; r < job.demand.size(); ++r)
                    node_load[h][r] += job.demand[r];
            for (const auto& path : emb.paths)
                for (EdgeId e : path) edge_load[e] += job.bandwidth_bps;
        }
        bool violated = false;
        for (NodeId u = 0; u < static_cast<NodeId>(net.node_count()) && !violated; ++u)
            for (std::size_t r = 0; r < net.registry().size(); ++r)
                if (node_load[u][r] > factors.beta[r] * net.node(u).capacity[r] + 1e-9) {
                    violated = true;
                    break;
                }
        for (EdgeId e = 0; e < static_cast<EdgeId>(net.edge_count()) && !violated; ++e)
            if (edge_load[e] > factors.gamma_edge * net.edge(e).bandwidth_bps * (1 + 1e-12) + 1e-9)
                violated = true;
        if (!violated || alloc.embeddings.empty()) return dropped;

        // Drop the embedded job with the smallest incremental utility.
        JobId victim = -1;
        double victim_pi = 0.0;
        for (const auto& [jid, emb] : alloc.embeddings) {
            const double pi = incremental_utility(*jobs.at(jid), z_prev.at(jid), emb.kappa);
            if (victim < 0 || pi < victim_pi) {
                victim = jid;
                victim_pi = pi;
            }
        }
        alloc.embeddings.erase(victim);
        ++dropped;
    }
}

}  // namespace

SlotResult solve_slot(const GvneInstance& inst, const GvneConfig& cfg, std::mt19937_64& rng) {
    SlotResult res;
    res.alloc.t = inst.t;
    res.diag.factors = inst.net->server_count() >= 3
                           ? violation_factors(inst, cfg.epsilon)
                           : ViolationFactors::strict(inst.net->registry().size());
    if (inst.net->server_count() < 3)
        res.diag.notes.push_back("fewer than three servers: strict capacity factors");
    if (inst.jobs.empty()) return res;

    for (const auto& aj : inst.jobs) {
        auto sizes = candidate_ring_sizes(*aj.job, aj.z_prev, *inst.net);
        if (!sizes.empty()) res.diag.q_upper[aj.job->id] = worker_upper_bound(*aj.job, aj.z_prev, *inst.net);
    }

    IlpModel model = build_ilp(inst);
    res.diag.excluded = model.excluded;
    if (model.blocks.empty()) {
        res.diag.notes.push_back("no embeddable jobs this slot");
        return res;
    }

    lp::LpSolution relax = lp::solve(model.lp, cfg.lp_options);
    if (!relax.optimal()) {
        res.diag.notes.push_back("ring-size relaxation failed: " + lp::to_string(relax.status));
        return res;
    }
    res.diag.ilp_objective = relax.objective;

    RingSelection sel = select_ring_sizes(relax, model);
    for (const auto& [jid, kappa] : sel.kappa) res.diag.selected_kappa[jid] = kappa;
    if (sel.kappa.empty()) {
        res.diag.notes.push_back("relaxation embedded no jobs");
        return res;
    }

    AugmentedModel aug = build_augmented_lp(inst, sel, cfg);
    lp::LpSolution aug_sol = lp::solve(aug.lp, cfg.lp_options);
    if (!aug_sol.optimal()) {
        res.diag.notes.push_back("augmented LP failed: " + lp::to_string(aug_sol.status));
        return res;
    }
    res.diag.augmented_objective = aug_sol.objective;

    std::vector<MappingSelection> selections = decompose(aug_sol, aug, cfg.feas_tol);
    for (const auto& s : selections)
        if (s.truncated_mass > cfg.feas_tol)
            res.diag.notes.push_back("job " + std::to_string(s.job) + ": decomposition truncated " +
                                     std::to_string(s.truncated_mass) + " mass");

    RoundingReport report;
    res.alloc = randomized_round(selections, inst, res.diag.factors, cfg.alpha, aug_sol.objective,
                                 cfg.rounding_rounds, rng, &report);
    res.diag.rounds_used = report.rounds_used;
    res.diag.accepted = report.accepted;
    if (!report.accepted && !report.violations.empty()) {
        res.diag.dropped_jobs = drop_until_relaxed_feasible(res.alloc, inst, res.diag.factors);
        if (res.diag.dropped_jobs > 0)
            res.diag.notes.push_back("dropped " + std::to_string(res.diag.dropped_jobs) +
                                     " job(s) to restore relaxed capacities");
    }

    for (const auto& aj : inst.jobs) {
        auto it = res.alloc.embeddings.find(aj.job->id);
        if (it != res.alloc.embeddings.end())
            res.diag.utility += incremental_utility(*aj.job, aj.z_prev, it->second.kappa);
    }

    // The contract: the returned allocation satisfies the relaxed capacities.
    std::map<JobId, double> z_prev;
    std::vector<Job> jobs;
    for (const auto& aj : inst.jobs) {
        z_prev[aj.job->id] = aj.z_prev;
        jobs.push_back(*aj.job);
    }
    res.diag.violations =
        validate_slot(res.alloc, jobs, *inst.net, z_prev, res.diag.factors.multipliers());
    return res;
}

}  // namespace rarsched::gvne
