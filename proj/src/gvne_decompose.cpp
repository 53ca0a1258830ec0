#include "rarsched/gvne.hpp"

#include <algorithm>
#include <queue>

#include "gvne_internal.hpp"

namespace rarsched::gvne {

namespace {

// Residual LP mass for one job block during decomposition.
struct Residual {
    std::vector<double> psi;                              // per copy
    std::vector<std::vector<std::vector<double>>> nodes;  // [copy][a-1][ci]
    std::vector<std::vector<std::vector<double>>> flows;  // [copy][virtual edge][substrate edge]
};

// BFS over positive-residual flow edges of one commodity; shortest hop count,
// neighbors explored in edge-id order for determinism.
bool find_flow_path(const SubstrateNetwork& net, const std::vector<double>& flow_res, double tol,
                    NodeId from, NodeId to, std::vector<EdgeId>& path) {
    std::vector<EdgeId> parent_edge(net.node_count(), -1);
    std::vector<char> seen(net.node_count(), 0);
    std::queue<NodeId> q;
    q.push(from);
    seen[from] = 1;
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop();
        if (u == to) break;
        for (EdgeId e : net.out_edges(u)) {
            if (flow_res[e] <= tol) continue;
            NodeId v = net.edge(e).to;
            if (seen[v]) continue;
            seen[v] = 1;
            parent_edge[v] = e;
            q.push(v);
        }
    }
    if (!seen[to]) return false;
    path.clear();
    for (NodeId at = to; at != from;) {
        EdgeId e = parent_edge[at];
        path.push_back(e);
        at = net.edge(e).from;
    }
    std::reverse(path.begin(), path.end());
    return true;
}

// Walks one integral mapping out of a copy's residual mass. For each ring hop
// the next host is taken from the servers carrying residual node mass that
// keep the ring a single cycle (continue the current run, open a fresh
// server, or rejoin the anchor and stay there): co-location on the current
// host first, then hosts the hop's residual flow actually reaches from it,
// preferring choices whose cumulative load stays inside the server. Dead ends
// backtrack over host choices.
class MappingWalker {
public:
    MappingWalker(const SubstrateNetwork& net, const AugmentedModel::JobBlock& block,
                  const Residual& res, int copy_idx, double tol)
        : net_(net), block_(block), res_(res), copy_(copy_idx), tol_(tol) {}

    bool run() {
        const int kappa = block_.kappa;
        hosts.assign(kappa, -1);
        hosts[0] = block_.copies[copy_].anchor;
        paths.assign(kappa >= 2 ? kappa : 0, {});
        if (kappa == 1) return true;
        return place(1, /*committed_to_anchor=*/false);
    }

    std::vector<NodeId> hosts;
    std::vector<std::vector<EdgeId>> paths;

private:
    // Hard filter: a node may only map to a server whose capacity admits the
    // per-worker demand. Overloads beyond that are the rounding stage's
    // problem, so cumulative fit is only a preference here.
    bool fits_cumulative(NodeId server, int workers) const {
        const Job& job = *block_.job_ref;
        for (std::size_t r = 0; r < job.demand.size(); ++r)
            if (workers * job.demand[r] > net_.node(server).capacity[r] + 1e-9) return false;
        return true;
    }

    bool place(int a, bool committed) {
        const int kappa = block_.kappa;
        const NodeId anchor = block_.copies[copy_].anchor;
        const NodeId prev = hosts[a - 1];

        // Hop distance from prev through the hop's residual flow.
        std::vector<int> dist(net_.node_count(), -1);
        {
            const auto& flow = res_.flows[copy_][a - 1];
            std::queue<NodeId> q;
            q.push(prev);
            dist[prev] = 0;
            while (!q.empty()) {
                NodeId u = q.front();
                q.pop();
                for (EdgeId e : net_.out_edges(u)) {
                    if (flow[e] <= tol_) continue;
                    NodeId v = net_.edge(e).to;
                    if (dist[v] >= 0) continue;
                    dist[v] = dist[u] + 1;
                    q.push(v);
                }
            }
        }

        struct Cand {
            int overload;   // 0 when the cumulative load still fits
            int hop_dist;   // 0 = co-located
            double neg_mass;
            NodeId u;
            bool operator<(const Cand& o) const {
                return std::tie(overload, hop_dist, neg_mass, u) <
                       std::tie(o.overload, o.hop_dist, o.neg_mass, o.u);
            }
        };
        std::vector<Cand> cands;
        for (std::size_t ci = 0; ci < block_.candidate_servers.size(); ++ci) {
            const NodeId u = block_.candidate_servers[ci];
            const double mass = res_.nodes[copy_][a - 1][ci];
            if (mass <= tol_) continue;
            if (committed && u != anchor) continue;
            if (!committed && u != prev && u != anchor) {
                bool used = false;
                for (int j = 0; j < a; ++j)
                    if (hosts[j] == u) { used = true; break; }
                if (used) continue;  // non-consecutive reuse would split the cycle
            }
            if (u != prev && dist[u] < 0) continue;  // hop flow never reaches u
            int count = 1;
            for (int j = 0; j < a; ++j)
                if (hosts[j] == u) ++count;
            cands.push_back({fits_cumulative(u, count) ? 0 : 1, u == prev ? 0 : dist[u], -mass, u});
        }
        std::sort(cands.begin(), cands.end());

        for (const Cand& c : cands) {
            const NodeId u = c.u;
            hosts[a] = u;
            const bool now_committed = committed || (u == anchor && prev != anchor);
            if (!route(a - 1)) {
                hosts[a] = -1;
                continue;
            }
            if (a + 1 < kappa) {
                if (place(a + 1, now_committed)) return true;
            } else if (route(kappa - 1)) {  // closing hop back to the anchor
                return true;
            }
            paths[a - 1].clear();
            hosts[a] = -1;
        }
        return false;
    }

    // Routes virtual edge (a, a+1 mod kappa) between the already-chosen hosts.
    bool route(int a) {
        const NodeId from = hosts[a];
        const NodeId to = hosts[(a + 1) % block_.kappa];
        if (from == to) {
            paths[a].clear();
            return true;
        }
        return find_flow_path(net_, res_.flows[copy_][a], tol_, from, to, paths[a]);
    }

    const SubstrateNetwork& net_;
    const AugmentedModel::JobBlock& block_;
    const Residual& res_;
    int copy_;
    double tol_;
};

}  // namespace

std::vector<MappingSelection> decompose(const lp::LpSolution& sol, const AugmentedModel& model,
                                        double feas_tol) {
    if (!sol.optimal()) throw std::invalid_argument("decompose requires an optimal LP solution");
    std::vector<MappingSelection> out;

    for (const auto& block : model.blocks) {
        MappingSelection sel;
        sel.job = block.job;
        sel.pi = block.pi;
        sel.rho_bar = sol.values[block.rho];

        Residual res;
        const std::size_t ncopies = block.copies.size();
        res.psi.resize(ncopies);
        res.nodes.resize(ncopies);
        res.flows.resize(ncopies);
        for (std::size_t c = 0; c < ncopies; ++c) {
            const auto& copy = block.copies[c];
            res.psi[c] = sol.values[copy.weight];
            res.nodes[c].resize(copy.node_map.size());
            for (std::size_t a = 0; a < copy.node_map.size(); ++a) {
                res.nodes[c][a].resize(copy.node_map[a].size());
                for (std::size_t ci = 0; ci < copy.node_map[a].size(); ++ci)
                    res.nodes[c][a][ci] = sol.values[copy.node_map[a][ci]];
            }
            res.flows[c].resize(copy.flow.size());
            for (std::size_t a = 0; a < copy.flow.size(); ++a) {
                res.flows[c][a].resize(copy.flow[a].size());
                for (std::size_t e = 0; e < copy.flow[a].size(); ++e)
                    res.flows[c][a][e] = sol.values[copy.flow[a][e]];
            }
        }

        auto candidate_index = [&](NodeId u) {
            return static_cast<std::size_t>(
                std::find(block.candidate_servers.begin(), block.candidate_servers.end(), u) -
                block.candidate_servers.begin());
        };

        while (true) {
            int best_copy = -1;
            double best_mass = feas_tol;
            for (std::size_t c = 0; c < ncopies; ++c) {
                if (res.psi[c] > best_mass) {
                    best_mass = res.psi[c];
                    best_copy = static_cast<int>(c);
                }
            }
            if (best_copy < 0) break;

            MappingWalker walker(*model.net, block, res, best_copy, feas_tol);
            if (!walker.run()) {
                // Stalled: LP noise or mass no walk can realize; drop the copy.
                sel.truncated_mass += res.psi[best_copy];
                res.psi[best_copy] = 0.0;
                continue;
            }

            // phi = min residual across every traversed variable; at least one
            // of them drops to zero, which bounds the number of extractions.
            double phi = res.psi[best_copy];
            for (int a = 1; a < block.kappa; ++a)
                phi = std::min(phi, res.nodes[best_copy][a - 1][candidate_index(walker.hosts[a])]);
            for (std::size_t a = 0; a < walker.paths.size(); ++a)
                for (EdgeId e : walker.paths[a]) phi = std::min(phi, res.flows[best_copy][a][e]);

            res.psi[best_copy] -= phi;
            for (int a = 1; a < block.kappa; ++a)
                res.nodes[best_copy][a - 1][candidate_index(walker.hosts[a])] -= phi;
            for (std::size_t a = 0; a < walker.paths.size(); ++a)
                for (EdgeId e : walker.paths[a]) res.flows[best_copy][a][e] -= phi;

            Embedding emb;
            emb.job = block.job;
            emb.kappa = block.kappa;
            emb.hosts = walker.hosts;
            emb.paths = walker.paths;
            sel.tuples.push_back({phi, std::move(emb)});
        }
        out.push_back(std::move(sel));
    }
    return out;
}

}  // namespace rarsched::gvne
