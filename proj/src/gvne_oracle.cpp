#include "rarsched/gvne.hpp"

#include <algorithm>

#include "gvne_internal.hpp"

namespace rarsched::gvne {

namespace {

// All simple directed paths between two nodes, shortest first. Instances are
// capped at a handful of nodes, so full enumeration stays tiny.
void enumerate_paths(const SubstrateNetwork& net, NodeId from, NodeId to,
                     std::vector<std::vector<EdgeId>>& out) {
    std::vector<EdgeId> stack;
    std::vector<char> visited(net.node_count(), 0);
    visited[from] = 1;
    auto dfs = [&](auto&& self, NodeId at) -> void {
        if (at == to) {
            out.push_back(stack);
            return;
        }
        for (EdgeId e : net.out_edges(at)) {
            NodeId v = net.edge(e).to;
            if (visited[v]) continue;
            visited[v] = 1;
            stack.push_back(e);
            self(self, v);
            stack.pop_back();
            visited[v] = 0;
        }
    };
    dfs(dfs, from);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
}

class OracleSearch {
public:
    OracleSearch(const GvneInstance& inst) : inst_(inst), net_(*inst.net) {
        const std::size_t nres = net_.registry().size();
        node_res_.resize(net_.node_count());
        for (NodeId u = 0; u < static_cast<NodeId>(net_.node_count()); ++u) {
            node_res_[u].resize(nres);
            for (std::size_t r = 0; r < nres; ++r) node_res_[u][r] = net_.node(u).capacity[r];
        }
        for (const auto& e : net_.edges()) edge_res_.push_back(e.bandwidth_bps);

        for (const auto& aj : inst.jobs) {
            ring_sizes_.push_back(candidate_ring_sizes(*aj.job, aj.z_prev, net_));
            double mx = 0.0;
            for (int kappa : ring_sizes_.back())
                mx = std::max(mx, incremental_utility(*aj.job, aj.z_prev, kappa));
            max_pi_.push_back(mx);
        }
        suffix_bound_.assign(inst.jobs.size() + 1, 0.0);
        for (int i = static_cast<int>(inst.jobs.size()) - 1; i >= 0; --i)
            suffix_bound_[i] = suffix_bound_[i + 1] + max_pi_[i];

        paths_.resize(net_.node_count());
        for (NodeId a : net_.servers()) {
            paths_[a].resize(net_.node_count());
            for (NodeId b : net_.servers())
                if (a != b) enumerate_paths(net_, a, b, paths_[a][b]);
        }

        best_.alloc.t = inst.t;
        best_.utility = 0.0;  // rejecting everything is always feasible
    }

    OracleResult run() {
        current_.t = inst_.t;
        search_job(0, 0.0);
        return best_;
    }

private:
    void search_job(std::size_t idx, double utility) {
        if (utility + suffix_bound_[idx] <= best_.utility + 1e-12) return;
        if (idx == inst_.jobs.size()) {
            best_.utility = utility;
            best_.alloc = current_;
            return;
        }
        search_job(idx + 1, utility);  // reject job idx this slot
        const Job& job = *inst_.jobs[idx].job;
        for (int kappa : ring_sizes_[idx]) {
            const double pi = incremental_utility(job, inst_.jobs[idx].z_prev, kappa);
            hosts_.assign(kappa, -1);
            paths_choice_.assign(kappa >= 2 ? kappa : 0, {});
            place(idx, kappa, 0, pi, utility);
        }
    }

    void place(std::size_t idx, int kappa, int a, double pi, double utility) {
        const Job& job = *inst_.jobs[idx].job;
        if (a == kappa) {
            if (kappa >= 2 && hosts_[kappa - 1] != hosts_[0]) {
                route_then_finish(idx, kappa, kappa - 1, pi, utility);
            } else {
                finish_job(idx, kappa, pi, utility);
            }
            return;
        }
        for (NodeId s : net_.servers()) {
            if (a > 0 && s < hosts_[0]) continue;  // canonical rotation: node 0 on a minimal host
            int count = 1;
            for (int j = 0; j < a; ++j)
                if (hosts_[j] == s) ++count;
            bool fits = true;
            for (std::size_t r = 0; r < job.demand.size(); ++r)
                if (count * job.demand[r] > node_res_[s][r] + 1e-9) { fits = false; break; }
            if (!fits) continue;
            hosts_[a] = s;
            take_node(s, job, +1);
            if (a >= 1 && hosts_[a - 1] != s) {
                route_hop(idx, kappa, a - 1, pi, utility,
                          [&] { place(idx, kappa, a + 1, pi, utility); });
            } else {
                if (a >= 1) paths_choice_[a - 1].clear();
                place(idx, kappa, a + 1, pi, utility);
            }
            take_node(s, job, -1);
            hosts_[a] = -1;
        }
    }

    void route_then_finish(std::size_t idx, int kappa, int hop, double pi, double utility) {
        route_hop(idx, kappa, hop, pi, utility, [&] { finish_job(idx, kappa, pi, utility); });
    }

    template <typename Next>
    void route_hop(std::size_t idx, int kappa, int hop, double pi, double utility, Next&& next) {
        const Job& job = *inst_.jobs[idx].job;
        const NodeId from = hosts_[hop];
        const NodeId to = hosts_[(hop + 1) % kappa];
        for (const auto& path : paths_[from][to]) {
            bool ok = true;
            for (EdgeId e : path)
                if (edge_res_[e] + 1e-6 < job.bandwidth_bps) { ok = false; break; }
            if (!ok) continue;
            for (EdgeId e : path) edge_res_[e] -= job.bandwidth_bps;
            paths_choice_[hop] = path;
            next();
            for (EdgeId e : path) edge_res_[e] += job.bandwidth_bps;
            paths_choice_[hop].clear();
        }
    }

    void finish_job(std::size_t idx, int kappa, double pi, double utility) {
        Embedding emb;
        emb.job = inst_.jobs[idx].job->id;
        emb.kappa = kappa;
        emb.hosts = hosts_;
        emb.paths = paths_choice_;
        current_.embeddings[emb.job] = std::move(emb);
        auto saved_hosts = hosts_;
        auto saved_paths = paths_choice_;
        search_job(idx + 1, utility + pi);
        hosts_ = std::move(saved_hosts);
        paths_choice_ = std::move(saved_paths);
        current_.embeddings.erase(inst_.jobs[idx].job->id);
    }

    void take_node(NodeId s, const Job& job, int sign) {
        for (std::size_t r = 0; r < job.demand.size(); ++r)
            node_res_[s][r] -= sign * job.demand[r];
    }

    const GvneInstance& inst_;
    const SubstrateNetwork& net_;
    std::vector<std::vector<double>> node_res_;
    std::vector<double> edge_res_;
    std::vector<std::vector<int>> ring_sizes_;
    std::vector<double> max_pi_;
    std::vector<double> suffix_bound_;
    std::vector<std::vector<std::vector<std::vector<EdgeId>>>> paths_;

    std::vector<NodeId> hosts_;
    std::vector<std::vector<EdgeId>> paths_choice_;
    SlotAllocation current_;
    OracleResult best_;
};

}  // namespace

OracleResult exact_oracle(const GvneInstance& inst, const OracleLimits& limits) {
    if (static_cast<int>(inst.jobs.size()) > limits.max_jobs)
        throw std::invalid_argument("oracle limit exceeded: too many jobs");
    if (static_cast<int>(inst.net->server_count()) > limits.max_servers)
        throw std::invalid_argument("oracle limit exceeded: too many servers");
    for (const auto& aj : inst.jobs) {
        auto sizes = candidate_ring_sizes(*aj.job, aj.z_prev, *inst.net);
        if (!sizes.empty() && sizes.back() > limits.max_kappa)
            throw std::invalid_argument("oracle limit exceeded: ring size too large");
    }
    if (inst.jobs.empty()) {
        OracleResult r;
        r.alloc.t = inst.t;
        return r;
    }
    OracleSearch search(inst);
    return search.run();
}

}  // namespace rarsched::gvne
