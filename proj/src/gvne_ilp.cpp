#include "rarsched/gvne.hpp"

#include <algorithm>
#include <cmath>

#include "gvne_internal.hpp"

namespace rarsched::gvne {

using detail::kGbps;

double worker_upper_bound(const Job& job, double z_prev, const SubstrateNetwork& net) {
    const double remaining = job.worker_time_budget() - z_prev;
    if (remaining <= 0.0)
        throw std::domain_error("worker_upper_bound called for a budget-exhausted job");
    // Continuous relaxation with a single job: each server contributes up to
    // min_r C_s^r / l_i^r fractional workers.
    double share = 0.0;
    for (NodeId s : net.servers()) {
        double per = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < job.demand.size(); ++r)
            if (job.demand[r] > 0.0) per = std::min(per, net.node(s).capacity[r] / job.demand[r]);
        share += std::isfinite(per) ? per : 0.0;
    }
    return std::min({static_cast<double>(job.max_workers), remaining, share});
}

std::vector<int> candidate_ring_sizes(const Job& job, double z_prev, const SubstrateNetwork& net) {
    const double remaining = job.worker_time_budget() - z_prev;
    if (remaining <= 0.0) return {};
    const double q = worker_upper_bound(job, z_prev, net);
    if (q < 1.0 - 1e-9) return {};
    const int ceil_q = static_cast<int>(std::ceil(q - 1e-9));
    std::vector<int> sizes;
    for (int kappa = 1; kappa <= ceil_q; ++kappa) {
        // ceil(q) may overshoot a fractional budget; the budget is exact.
        if (kappa <= remaining + 1e-9) sizes.push_back(kappa);
    }
    return sizes;
}

double incremental_utility(const Job& job, double z_prev, int kappa) {
    return job.utility_at(z_prev + kappa) - job.utility_at(z_prev);
}

namespace {

// LP objective coefficient for a ring choice. Far-from-midpoint sigmoid jobs
// have gains below double precision; a vanishing floor keeps them eligible
// for leftover capacity instead of starving them until the horizon.
double lp_gain(const Job& job, double z_prev, int kappa) {
    return std::max(incremental_utility(job, z_prev, kappa), 1e-6 * kappa);
}

// True iff no allocation can ever increase the utility again (saturated
// sigmoid); such jobs stay active but are pointless to embed.
bool utility_exhausted(const Job& job, double z_prev) {
    return job.utility_at(z_prev + 1e9) - job.utility_at(z_prev) <= 0.0;
}

}  // namespace

IlpModel build_ilp(const GvneInstance& inst) {
    if (inst.jobs.empty()) throw std::invalid_argument("build_ilp on an empty instance");
    const SubstrateNetwork& net = *inst.net;
    const std::size_t nres = net.registry().size();
    const int nedges = static_cast<int>(net.edge_count());

    IlpModel model;
    auto& lp = model.lp;

    // Shared capacity accumulators, rows emitted once all variables exist.
    std::map<std::pair<NodeId, int>, std::vector<std::pair<int, double>>> node_cap;
    std::vector<std::vector<std::pair<int, double>>> edge_cap(nedges);

    for (const ActiveJob& aj : inst.jobs) {
        const Job& job = *aj.job;
        auto sizes = candidate_ring_sizes(job, aj.z_prev, net);
        auto cands = detail::admissible_servers(job, net);
        if (sizes.empty() || cands.empty() || utility_exhausted(job, aj.z_prev)) {
            model.excluded.push_back(job.id);
            continue;
        }

        IlpModel::JobBlock b;
        b.job = job.id;
        b.candidate_servers = cands;
        b.ring_sizes = sizes;
        const std::string J = std::to_string(job.id);
        b.rho = lp.add_variable("rho_" + J, 0.0, 1.0);

        for (std::size_t k = 0; k < sizes.size(); ++k) {
            const int kappa = sizes[k];
            const double pi = lp_gain(job, aj.z_prev, kappa);
            b.pi.push_back(pi);
            const int chi = lp.add_variable("chi_" + J + "_" + std::to_string(kappa), 0.0, 1.0);
            lp.set_objective_coeff(chi, pi);
            b.chi.push_back(chi);

            std::vector<std::vector<int>> nodes(kappa);
            for (int a = 0; a < kappa; ++a) {
                nodes[a].resize(cands.size());
                for (std::size_t ci = 0; ci < cands.size(); ++ci)
                    nodes[a][ci] = lp.add_variable(
                        "q_" + J + "_" + std::to_string(kappa) + "_" + std::to_string(a) + "_" +
                            std::to_string(cands[ci]),
                        0.0, 1.0);
            }
            b.node_map.push_back(std::move(nodes));

            std::vector<std::vector<int>> flows;
            if (kappa >= 2) {
                flows.resize(kappa);
                for (int a = 0; a < kappa; ++a) {
                    flows[a].resize(nedges);
                    for (int e = 0; e < nedges; ++e)
                        flows[a][e] = lp.add_variable("f_" + J + "_" + std::to_string(kappa) + "_" +
                                                          std::to_string(a) + "_" + std::to_string(e),
                                                      0.0, 1.0);
                }
            }
            b.flow.push_back(std::move(flows));
        }

        // Cumulative-load variables h_i^{u,r} and o_i^{u,v}.
        b.node_load.resize(cands.size());
        for (std::size_t ci = 0; ci < cands.size(); ++ci) {
            b.node_load[ci].resize(nres);
            for (std::size_t r = 0; r < nres; ++r)
                b.node_load[ci][r] =
                    lp.add_variable("h_" + J + "_" + std::to_string(cands[ci]) + "_" + std::to_string(r));
        }
        const bool any_ring = b.ring_sizes.back() >= 2;
        if (any_ring) {
            b.edge_load.resize(nedges);
            for (int e = 0; e < nedges; ++e)
                b.edge_load[e] = lp.add_variable("o_" + J + "_" + std::to_string(e));
        }

        // One ring size at most: sum_kappa chi = rho.
        {
            std::vector<std::pair<int, double>> row;
            for (int chi : b.chi) row.emplace_back(chi, 1.0);
            row.emplace_back(b.rho, -1.0);
            lp.add_constraint(std::move(row), lp::Relation::Equal, 0.0, "one_ring_" + J);
        }
        for (std::size_t k = 0; k < sizes.size(); ++k) {
            const int kappa = sizes[k];
            // Every virtual node lands on some server: sum_u q = chi.
            for (int a = 0; a < kappa; ++a) {
                std::vector<std::pair<int, double>> row;
                for (std::size_t ci = 0; ci < cands.size(); ++ci)
                    row.emplace_back(b.node_map[k][a][ci], 1.0);
                row.emplace_back(b.chi[k], -1.0);
                lp.add_constraint(std::move(row), lp::Relation::Equal, 0.0);
            }
            // Unit flow per virtual edge: conservation at every substrate node.
            if (kappa >= 2) {
                for (int a = 0; a < kappa; ++a) {
                    const int bnode = (a + 1) % kappa;
                    for (NodeId u = 0; u < static_cast<NodeId>(net.node_count()); ++u) {
                        std::vector<std::pair<int, double>> row;
                        for (EdgeId e : net.out_edges(u)) row.emplace_back(b.flow[k][a][e], 1.0);
                        for (EdgeId e : net.in_edges(u)) row.emplace_back(b.flow[k][a][e], -1.0);
                        for (std::size_t ci = 0; ci < cands.size(); ++ci) {
                            if (cands[ci] != u) continue;
                            row.emplace_back(b.node_map[k][a][ci], -1.0);
                            row.emplace_back(b.node_map[k][bnode][ci], 1.0);
                        }
                        if (!row.empty())
                            lp.add_constraint(std::move(row), lp::Relation::Equal, 0.0);
                    }
                }
            }
        }
        // Load accumulation: h = sum_kappa sum_a l^r q; o = sum b f.
        for (std::size_t ci = 0; ci < cands.size(); ++ci) {
            for (std::size_t r = 0; r < nres; ++r) {
                std::vector<std::pair<int, double>> row;
                for (std::size_t k = 0; k < sizes.size(); ++k)
                    for (int a = 0; a < sizes[k]; ++a)
                        row.emplace_back(b.node_map[k][a][ci], job.demand[r]);
                row.emplace_back(b.node_load[ci][r], -1.0);
                lp.add_constraint(std::move(row), lp::Relation::Equal, 0.0);
                node_cap[{cands[ci], static_cast<int>(r)}].emplace_back(b.node_load[ci][r], 1.0);
            }
        }
        if (any_ring) {
            for (int e = 0; e < nedges; ++e) {
                std::vector<std::pair<int, double>> row;
                for (std::size_t k = 0; k < sizes.size(); ++k) {
                    if (sizes[k] < 2) continue;
                    for (int a = 0; a < sizes[k]; ++a)
                        row.emplace_back(b.flow[k][a][e], job.bandwidth_bps / kGbps);
                }
                row.emplace_back(b.edge_load[e], -1.0);
                lp.add_constraint(std::move(row), lp::Relation::Equal, 0.0);
                edge_cap[e].emplace_back(b.edge_load[e], 1.0);
            }
        }
        model.blocks.push_back(std::move(b));
    }

    for (auto& [key, row] : node_cap) {
        lp.add_constraint(std::move(row), lp::Relation::LessEq,
                          net.node(key.first).capacity[key.second],
                          "cap_n" + std::to_string(key.first) + "_r" + std::to_string(key.second));
    }
    for (int e = 0; e < nedges; ++e) {
        if (edge_cap[e].empty()) continue;
        lp.add_constraint(std::move(edge_cap[e]), lp::Relation::LessEq,
                          net.edge(e).bandwidth_bps / kGbps, "cap_e" + std::to_string(e));
    }
    return model;
}

RingSelection select_ring_sizes(const lp::LpSolution& sol, const IlpModel& model) {
    if (!sol.optimal()) throw std::invalid_argument("ring selection requires an optimal LP solution");
    constexpr double kTol = 1e-9;
    RingSelection out;
    for (const auto& b : model.blocks) {
        const double rho = sol.values[b.rho];
        if (rho <= kTol) continue;  // rejected this slot
        int best_kappa = -1;
        double best_product = -1.0;
        for (std::size_t k = 0; k < b.ring_sizes.size(); ++k) {
            const double chi = sol.values[b.chi[k]];
            if (chi <= kTol) continue;
            const double product = b.pi[k] * chi;
            // Ties go to the smaller ring, which the ascending scan gives us.
            if (product > best_product + 1e-12) {
                best_product = product;
                best_kappa = b.ring_sizes[k];
            }
        }
        if (best_kappa < 0) continue;
        out.kappa[b.job] = best_kappa;
        out.rho_bar[b.job] = rho;
    }
    return out;
}

AugmentedModel build_augmented_lp(const GvneInstance& inst, const RingSelection& sel,
                                  const GvneConfig& cfg) {
    const SubstrateNetwork& net = *inst.net;
    const std::size_t nres = net.registry().size();
    const int nedges = static_cast<int>(net.edge_count());

    AugmentedModel model;
    model.net = inst.net;
    auto& lp = model.lp;

    std::map<std::pair<NodeId, int>, std::vector<std::pair<int, double>>> node_cap;
    std::vector<std::vector<std::pair<int, double>>> edge_cap(nedges);

    for (const ActiveJob& aj : inst.jobs) {
        const Job& job = *aj.job;
        auto it = sel.kappa.find(job.id);
        if (it == sel.kappa.end()) continue;
        const int kappa = it->second;
        auto cands = detail::admissible_servers(job, net);
        if (cands.empty()) continue;

        // Anchor ranking: roomier servers first, ties by id.
        std::vector<NodeId> anchors = cands;
        std::stable_sort(anchors.begin(), anchors.end(), [&](NodeId a, NodeId b2) {
            return detail::max_colocated_workers(job, net, a) >
                   detail::max_colocated_workers(job, net, b2);
        });
        if (cfg.anchor_copy_cap > 0 && static_cast<int>(anchors.size()) > cfg.anchor_copy_cap)
            anchors.resize(cfg.anchor_copy_cap);

        AugmentedModel::JobBlock b;
        b.job = job.id;
        b.job_ref = aj.job;
        b.kappa = kappa;
        b.z_prev = aj.z_prev;
        b.pi = lp_gain(job, aj.z_prev, kappa);
        b.candidate_servers = cands;
        const std::string J = std::to_string(job.id);
        b.rho = lp.add_variable("rho_" + J, 0.0, 1.0);
        lp.set_objective_coeff(b.rho, b.pi);

        std::vector<std::pair<int, double>> coupling;
        for (NodeId anchor : anchors) {
            AugmentedModel::Copy copy;
            copy.anchor = anchor;
            const std::string C = J + "_a" + std::to_string(anchor);
            copy.weight = lp.add_variable("psi_" + C, 0.0, 1.0);
            coupling.emplace_back(copy.weight, 1.0);

            // A vanishing skew cost breaks the mirror symmetry between ring
            // nodes; without it the solver can park distinct nodes on
            // identical fractional marginals with zero connecting flow, which
            // no integral mapping realizes. Position-monotone scores make the
            // cheapest integral patterns single contiguous runs per server
            // (anchor scored 0, so reuse of it gravitates to the tail, which
            // wraps onto virtual node 0).
            const double skew = 1e-7 * b.pi;
            copy.node_map.resize(std::max(kappa - 1, 0));
            for (int a = 1; a < kappa; ++a) {
                copy.node_map[a - 1].resize(cands.size());
                std::vector<std::pair<int, double>> assign;
                for (std::size_t ci = 0; ci < cands.size(); ++ci) {
                    const int v = lp.add_variable(
                        "q_" + C + "_" + std::to_string(a) + "_" + std::to_string(cands[ci]), 0.0, 1.0);
                    copy.node_map[a - 1][ci] = v;
                    const double score = cands[ci] == anchor
                                             ? 0.0
                                             : (1.0 + ci) / (cands.size() + 1.0);
                    lp.set_objective_coeff(v, -skew * a * score);
                    assign.emplace_back(v, 1.0);
                }
                assign.emplace_back(copy.weight, -1.0);
                lp.add_constraint(std::move(assign), lp::Relation::Equal, 0.0);
            }
            // Conditional per-copy packing rows: an integral mapping rooted at
            // this anchor never puts more workers on a server than its full
            // capacity admits, so the scaled form (sum of job-i workers on u)
            // <= fit(u) * psi is a valid tightening. It stops the relaxation
            // from piling fractional co-location beyond any realizable ring.
            for (std::size_t ci = 0; ci < cands.size(); ++ci) {
                const int fit = detail::max_colocated_workers(job, net, cands[ci]);
                if (fit >= kappa) continue;
                std::vector<std::pair<int, double>> row;
                for (int a = 1; a < kappa; ++a) row.emplace_back(copy.node_map[a - 1][ci], 1.0);
                const double anchor_term = cands[ci] == anchor ? 1.0 : 0.0;
                row.emplace_back(copy.weight, anchor_term - fit);
                if (!row.empty())
                    lp.add_constraint(std::move(row), lp::Relation::LessEq, 0.0);
            }

            if (kappa >= 2) {
                copy.flow.resize(kappa);
                for (int a = 0; a < kappa; ++a) {
                    copy.flow[a].resize(nedges);
                    for (int e = 0; e < nedges; ++e)
                        copy.flow[a][e] = lp.add_variable(
                            "f_" + C + "_" + std::to_string(a) + "_" + std::to_string(e), 0.0, 1.0);
                }
                // Conservation; virtual node 0 is pinned to the anchor, so its
                // indicator is the copy weight itself.
                for (int a = 0; a < kappa; ++a) {
                    const int bnode = (a + 1) % kappa;
                    for (NodeId u = 0; u < static_cast<NodeId>(net.node_count()); ++u) {
                        std::vector<std::pair<int, double>> row;
                        for (EdgeId e : net.out_edges(u)) row.emplace_back(copy.flow[a][e], 1.0);
                        for (EdgeId e : net.in_edges(u)) row.emplace_back(copy.flow[a][e], -1.0);
                        auto emit = [&](int vnode, double sign) {
                            if (vnode == 0) {
                                if (u == anchor) row.emplace_back(copy.weight, sign);
                            } else {
                                for (std::size_t ci = 0; ci < cands.size(); ++ci)
                                    if (cands[ci] == u)
                                        row.emplace_back(copy.node_map[vnode - 1][ci], sign);
                            }
                        };
                        emit(a, -1.0);
                        emit(bnode, 1.0);
                        if (!row.empty())
                            lp.add_constraint(std::move(row), lp::Relation::Equal, 0.0);
                    }
                }
            }

            // Shared capacity contributions.
            for (std::size_t r = 0; r < nres; ++r) {
                if (job.demand[r] <= 0.0) continue;
                node_cap[{anchor, static_cast<int>(r)}].emplace_back(copy.weight, job.demand[r]);
                for (int a = 1; a < kappa; ++a)
                    for (std::size_t ci = 0; ci < cands.size(); ++ci)
                        node_cap[{cands[ci], static_cast<int>(r)}].emplace_back(
                            copy.node_map[a - 1][ci], job.demand[r]);
            }
            if (kappa >= 2)
                for (int a = 0; a < kappa; ++a)
                    for (int e = 0; e < nedges; ++e)
                        edge_cap[e].emplace_back(copy.flow[a][e], job.bandwidth_bps / kGbps);

            b.copies.push_back(std::move(copy));
        }
        coupling.emplace_back(b.rho, -1.0);
        lp.add_constraint(std::move(coupling), lp::Relation::Equal, 0.0, "couple_" + J);
        model.blocks.push_back(std::move(b));
    }

    for (auto& [key, row] : node_cap) {
        lp.add_constraint(std::move(row), lp::Relation::LessEq,
                          net.node(key.first).capacity[key.second],
                          "cap_n" + std::to_string(key.first) + "_r" + std::to_string(key.second));
    }
    for (int e = 0; e < nedges; ++e) {
        if (edge_cap[e].empty()) continue;
        lp.add_constraint(std::move(edge_cap[e]), lp::Relation::LessEq,
                          net.edge(e).bandwidth_bps / kGbps, "cap_e" + std::to_string(e));
    }
    return model;
}

}  // namespace rarsched::gvne
