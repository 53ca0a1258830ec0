#include "rarsched/gvne.hpp"

#include <algorithm>
#include <cmath>

#include "gvne_internal.hpp"

namespace rarsched::gvne {

ViolationFactors ViolationFactors::strict(std::size_t resource_count) {
    ViolationFactors f;
    f.epsilon = 0.0;
    f.beta.assign(resource_count, 1.0);
    f.gamma_edge = 1.0;
    f.delta_node.assign(resource_count, 0.0);
    f.delta_edge = 0.0;
    return f;
}

ViolationFactors violation_factors(const GvneInstance& inst, double epsilon) {
    const SubstrateNetwork& net = *inst.net;
    if (net.server_count() < 3)
        throw std::invalid_argument("violation factors need at least three servers");
    if (epsilon < 0.0) throw std::invalid_argument("epsilon must be nonnegative");

    const std::size_t nres = net.registry().size();
    ViolationFactors f;
    f.epsilon = epsilon;
    f.delta_node.assign(nres, 0.0);
    f.beta.assign(nres, 1.0);

    // Per job: the largest worker count it may still request this slot.
    std::vector<int> ceil_q(inst.jobs.size(), 0);
    for (std::size_t i = 0; i < inst.jobs.size(); ++i) {
        auto sizes = candidate_ring_sizes(*inst.jobs[i].job, inst.jobs[i].z_prev, net);
        ceil_q[i] = sizes.empty() ? 0 : sizes.back();
    }

    // Delta^r(V_s) = max_u sum_{i: d^r_max(i,u) > 0} (C^r_max / d^r_max)^2,
    // with C^r_max(i,u) the most load one valid mapping can stack on u.
    for (std::size_t r = 0; r < nres; ++r) {
        double worst = 0.0;
        for (NodeId u : net.servers()) {
            double sum = 0.0;
            for (std::size_t i = 0; i < inst.jobs.size(); ++i) {
                const Job& job = *inst.jobs[i].job;
                if (job.demand[r] <= 0.0 || ceil_q[i] == 0) continue;
                if (!job.demand.fits_within(net.node(u).capacity)) continue;
                const int stack = std::min(ceil_q[i], detail::max_colocated_workers(job, net, u));
                sum += static_cast<double>(stack) * stack;
            }
            worst = std::max(worst, sum);
        }
        f.delta_node[r] = worst;
        f.beta[r] = 1.0 + epsilon * std::sqrt(2.0 * worst * std::log(static_cast<double>(net.server_count())));
    }

    // Delta(E_s): a valid mapping routes each of its <= kappa virtual edges on
    // a simple path, so one substrate edge carries at most kappa * b_i.
    double worst_edge = 0.0;
    for (const auto& e : net.edges()) {
        double sum = 0.0;
        for (std::size_t i = 0; i < inst.jobs.size(); ++i) {
            const Job& job = *inst.jobs[i].job;
            if (ceil_q[i] < 2) continue;                       // single workers use no edges
            if (job.bandwidth_bps > e.bandwidth_bps) continue; // cannot route here at all
            sum += static_cast<double>(ceil_q[i]) * ceil_q[i];
        }
        worst_edge = std::max(worst_edge, sum);
    }
    f.delta_edge = worst_edge;
    f.gamma_edge =
        net.edge_count() >= 2
            ? 1.0 + epsilon * std::sqrt(2.0 * worst_edge * std::log(static_cast<double>(net.edge_count())))
            : 1.0;
    return f;
}

namespace {

struct Loads {
    std::vector<std::vector<double>> node;  // [node][resource]
    std::vector<double> edge;
};

Loads compute_loads(const SlotAllocation& alloc, const GvneInstance& inst) {
    const SubstrateNetwork& net = *inst.net;
    Loads loads;
    loads.node.assign(net.node_count(), std::vector<double>(net.registry().size(), 0.0));
    loads.edge.assign(net.edge_count(), 0.0);
    for (const auto& [jid, emb] : alloc.embeddings) {
        const Job* job = nullptr;
        for (const auto& aj : inst.jobs)
            if (aj.job->id == jid) { job = aj.job; break; }
        if (!job) continue;
        for (NodeId h : emb.hosts)
            for (std::size_t r = 0; r < job->demand.size(); ++r)
                loads.node[h][r] += job->demand[r];
        for (const auto& path : emb.paths)
            for (EdgeId e : path) loads.edge[e] += job->bandwidth_bps;
    }
    return loads;
}

std::vector<Violation> relaxed_capacity_violations(const Loads& loads, const GvneInstance& inst,
                                                   const ViolationFactors& factors) {
    const SubstrateNetwork& net = *inst.net;
    std::vector<Violation> out;
    for (NodeId u = 0; u < static_cast<NodeId>(net.node_count()); ++u) {
        for (std::size_t r = 0; r < net.registry().size(); ++r) {
            const double limit = factors.beta[r] * net.node(u).capacity[r];
            if (loads.node[u][r] > limit + 1e-9)
                out.push_back({Violation::Kind::NodeCapacity, -1, u, -1, loads.node[u][r], limit,
                               net.registry().name(r)});
        }
    }
    for (EdgeId e = 0; e < static_cast<EdgeId>(net.edge_count()); ++e) {
        const double limit = factors.gamma_edge * net.edge(e).bandwidth_bps;
        if (loads.edge[e] > limit * (1 + 1e-12) + 1e-9)
            out.push_back({Violation::Kind::EdgeCapacity, -1, -1, e, loads.edge[e], limit, ""});
    }
    return out;
}

}  // namespace

SlotAllocation randomized_round(const std::vector<MappingSelection>& selections,
                                const GvneInstance& inst, const ViolationFactors& factors,
                                double alpha, double lp_objective, int max_rounds,
                                std::mt19937_64& rng, RoundingReport* report) {
    if (max_rounds < 1) throw std::invalid_argument("rounding needs at least one round");
    const double target = alpha * lp_objective;


    SlotAllocation best;
    best.t = inst.t;
    double best_utility = -1.0;
    std::vector<Violation> best_violations;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    RoundingReport rep;
    rep.target_utility = target;

    for (int round = 1; round <= max_rounds; ++round) {
        rep.rounds_used = round;
        SlotAllocation alloc;
        alloc.t = inst.t;
        double utility = 0.0;
        for (const auto& sel : selections) {
            const double u = unit(rng);
            double acc = 0.0;
            for (const auto& tup : sel.tuples) {
                acc += tup.phi;
                if (u < acc) {
                    alloc.embeddings[sel.job] = tup.embedding;
                    utility += sel.pi;  // the LP-objective gain of this job's ring
                    break;
                }
            }
            // u >= sum phi: the job is rejected this round.
        }

        const Loads loads = compute_loads(alloc, inst);
        auto violations = relaxed_capacity_violations(loads, inst, factors);
        const bool utility_ok = utility >= target - 1e-9 * std::max(1.0, std::abs(target));
        if (utility_ok && violations.empty()) {
            rep.accepted = true;
            rep.achieved_utility = utility;
            rep.violations.clear();
            if (report) *report = rep;
            return alloc;
        }
        if (utility > best_utility) {
            best_utility = utility;
            best = std::move(alloc);
            best_violations = std::move(violations);
        }
    }

    rep.accepted = false;
    rep.achieved_utility = std::max(best_utility, 0.0);
    rep.violations = best_violations;
    if (report) *report = rep;
    return best;
}

}  // namespace rarsched::gvne
