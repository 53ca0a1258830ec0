#include "rarsched/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace rarsched::policy {

Residuals Residuals::of(const SubstrateNetwork& net) {
    Residuals r;
    for (const auto& n : net.nodes()) r.node.push_back(n.capacity);
    for (const auto& e : net.edges()) r.edge_bps.push_back(e.bandwidth_bps);
    return r;
}

void Residuals::apply(const Embedding& emb, const Job& job, double sign) {
    for (NodeId h : emb.hosts) node[h].add_scaled(job.demand, -sign);
    for (const auto& path : emb.paths)
        for (EdgeId e : path) edge_bps[e] -= sign * job.bandwidth_bps;
}

namespace {

int gpu_index(const SubstrateNetwork& net) {
    const int idx = net.registry().index_of("gpu");
    return idx >= 0 ? idx : 0;
}

// Shortest path (hop count) over edges with residual bandwidth >= need.
bool bandwidth_path(const SubstrateNetwork& net, const Residuals& res, NodeId from, NodeId to,
                    double need_bps, std::vector<EdgeId>& path) {
    std::vector<EdgeId> parent(net.node_count(), -1);
    std::vector<char> seen(net.node_count(), 0);
    std::queue<NodeId> q;
    q.push(from);
    seen[from] = 1;
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop();
        if (u == to) break;
        for (EdgeId e : net.out_edges(u)) {
            if (res.edge_bps[e] + 1e-6 < need_bps) continue;
            NodeId v = net.edge(e).to;
            if (seen[v]) continue;
            seen[v] = 1;
            parent[v] = e;
            q.push(v);
        }
    }
    if (!seen[to]) return false;
    path.clear();
    for (NodeId at = to; at != from;) {
        path.push_back(parent[at]);
        at = net.edge(parent[at]).from;
    }
    std::reverse(path.begin(), path.end());
    return true;
}

}  // namespace

std::optional<Embedding> greedy_place(const Job& job, int kappa, const SubstrateNetwork& net,
                                      Residuals& res) {
    if (kappa < 1) throw std::invalid_argument("greedy_place needs kappa >= 1");
    const int gpu = gpu_index(net);

    std::vector<NodeId> order = net.servers();
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        return res.node[a][gpu] > res.node[b][gpu];
    });

    // Pack co-located runs first.
    std::vector<std::pair<NodeId, int>> packing;  // (server, workers)
    int remaining = kappa;
    for (NodeId s : order) {
        if (remaining == 0) break;
        int fit = remaining;
        for (std::size_t r = 0; r < job.demand.size(); ++r) {
            if (job.demand[r] <= 0.0) continue;
            fit = std::min(fit, static_cast<int>(std::floor(res.node[s][r] / job.demand[r] + 1e-9)));
        }
        if (fit <= 0) continue;
        packing.emplace_back(s, fit);
        remaining -= fit;
    }
    if (remaining > 0) return std::nullopt;

    Embedding emb;
    emb.job = job.id;
    emb.kappa = kappa;
    for (auto [s, cnt] : packing)
        for (int k = 0; k < cnt; ++k) emb.hosts.push_back(s);

    if (packing.size() > 1 || kappa >= 2) {
        emb.paths.assign(kappa, {});
        Residuals scratch = res;
        for (int a = 0; a < kappa; ++a) {
            const NodeId from = emb.hosts[a];
            const NodeId to = emb.hosts[(a + 1) % kappa];
            if (from == to) continue;
            if (!bandwidth_path(net, scratch, from, to, job.bandwidth_bps, emb.paths[a]))
                return std::nullopt;
            for (EdgeId e : emb.paths[a]) scratch.edge_bps[e] -= job.bandwidth_bps;
        }
    }
    if (!validate_ring(emb, net)) return std::nullopt;

    res.apply(emb, job, +1.0);
    return emb;
}

namespace {

double headroom_workers(const Job& job, const std::map<JobId, double>& z_prev) {
    double z = 0.0;
    if (auto it = z_prev.find(job.id); it != z_prev.end()) z = it->second;
    return job.worker_time_budget() - z;
}

int request_size(const Job& job, int fixed_workers, const std::map<JobId, double>& z_prev) {
    const int head = static_cast<int>(std::floor(headroom_workers(job, z_prev) + 1e-9));
    return std::min({fixed_workers, job.max_workers, head});
}

}  // namespace

FifoPolicy::FifoPolicy(int fixed_workers) : fixed_workers_(fixed_workers) {
    if (fixed_workers < 1 || fixed_workers > 10)
        throw std::invalid_argument("fixed worker count must lie in [1,10]");
}

gvne::SlotResult FifoPolicy::allocate(int t, const std::vector<const Job*>& active,
                                      const std::map<JobId, double>& z_prev,
                                      const SubstrateNetwork& net, std::mt19937_64&) {
    gvne::SlotResult res;
    res.alloc.t = t;
    res.diag.factors = gvne::ViolationFactors::strict(net.registry().size());
    std::vector<const Job*> order = active;
    std::stable_sort(order.begin(), order.end(), [](const Job* a, const Job* b) {
        return std::tie(a->arrival, a->id) < std::tie(b->arrival, b->id);
    });

    Residuals residuals = Residuals::of(net);
    for (const Job* j : order) {
        const int want = request_size(*j, fixed_workers_, z_prev);
        if (want < 1) continue;  // cannot take a whole worker; does not block the queue
        auto emb = greedy_place(*j, want, net, residuals);
        if (!emb) break;  // head-of-line blocking: later arrivals wait
        res.alloc.embeddings[j->id] = std::move(*emb);
    }
    return res;
}

double dominant_share(const ResourceVector& allocated, const ResourceVector& cluster_total) {
    double share = 0.0;
    for (std::size_t r = 0; r < allocated.size(); ++r)
        if (cluster_total[r] > 0.0) share = std::max(share, allocated[r] / cluster_total[r]);
    return share;
}

gvne::SlotResult DrfPolicy::allocate(int t, const std::vector<const Job*>& active,
                                     const std::map<JobId, double>& z_prev,
                                     const SubstrateNetwork& net, std::mt19937_64&) {
    gvne::SlotResult res;
    res.alloc.t = t;
    res.diag.factors = gvne::ViolationFactors::strict(net.registry().size());

    ResourceVector cluster(net.registry().size(), 0.0);
    for (NodeId s : net.servers()) cluster.add_scaled(net.node(s).capacity, 1.0);

    std::vector<const Job*> order = active;
    std::stable_sort(order.begin(), order.end(), [](const Job* a, const Job* b) {
        return std::tie(a->arrival, a->id) < std::tie(b->arrival, b->id);
    });

    Residuals residuals = Residuals::of(net);
    std::map<JobId, int> granted;
    std::map<JobId, bool> saturated;
    for (const Job* j : order) {
        granted[j->id] = 0;
        saturated[j->id] = false;
    }

    while (true) {
        // Grant one worker to the unsaturated job with the least dominant share.
        const Job* pick = nullptr;
        double pick_share = 0.0;
        for (const Job* j : order) {
            if (saturated[j->id]) continue;
            const double share = dominant_share(j->demand.scaled(granted[j->id]), cluster);
            if (!pick || share < pick_share - 1e-12) {
                pick = j;
                pick_share = share;
            }
        }
        if (!pick) break;

        const int next = granted[pick->id] + 1;
        const int cap = std::min(pick->max_workers,
                                 static_cast<int>(std::floor(headroom_workers(*pick, z_prev) + 1e-9)));
        if (next > cap) {
            saturated[pick->id] = true;
            continue;
        }
        // Regrow the ring from scratch with one more worker.
        Residuals scratch = residuals;
        if (auto it = res.alloc.embeddings.find(pick->id); it != res.alloc.embeddings.end())
            scratch.apply(it->second, *pick, -1.0);
        auto emb = greedy_place(*pick, next, net, scratch);
        if (!emb) {
            saturated[pick->id] = true;
            continue;
        }
        res.alloc.embeddings[pick->id] = std::move(*emb);
        granted[pick->id] = next;
        residuals = std::move(scratch);
    }
    return res;
}

LasPolicy::LasPolicy(int fixed_workers) : fixed_workers_(fixed_workers) {
    if (fixed_workers < 1 || fixed_workers > 10)
        throw std::invalid_argument("fixed worker count must lie in [1,10]");
}

gvne::SlotResult LasPolicy::allocate(int t, const std::vector<const Job*>& active,
                                     const std::map<JobId, double>& z_prev,
                                     const SubstrateNetwork& net, std::mt19937_64&) {
    gvne::SlotResult res;
    res.alloc.t = t;
    res.diag.factors = gvne::ViolationFactors::strict(net.registry().size());
    const int gpu = gpu_index(net);

    // Least attained service first: accumulated worker-slots weighted by the
    // per-worker GPU demand as the accelerator-time proxy.
    std::vector<const Job*> order = active;
    auto attained = [&](const Job* j) {
        double z = 0.0;
        if (auto it = z_prev.find(j->id); it != z_prev.end()) z = it->second;
        return z * j->demand[gpu];
    };
    std::stable_sort(order.begin(), order.end(), [&](const Job* a, const Job* b) {
        const double sa = attained(a), sb = attained(b);
        if (sa != sb) return sa < sb;
        return std::tie(a->arrival, a->id) < std::tie(b->arrival, b->id);
    });

    Residuals residuals = Residuals::of(net);
    for (const Job* j : order) {
        const int want = request_size(*j, fixed_workers_, z_prev);
        if (want < 1) continue;
        auto emb = greedy_place(*j, want, net, residuals);
        if (!emb) continue;  // round-robin moves on
        res.alloc.embeddings[j->id] = std::move(*emb);
    }
    return res;
}

std::unique_ptr<SlotPolicy> make_policy(const std::string& name, const gvne::GvneConfig& cfg,
                                        int fixed_workers) {
    if (name == "gadget") return std::make_unique<GadgetPolicy>(cfg);
    if (name == "fifo") return std::make_unique<FifoPolicy>(fixed_workers);
    if (name == "drf") return std::make_unique<DrfPolicy>();
    if (name == "las") return std::make_unique<LasPolicy>(fixed_workers);
    throw std::invalid_argument("unknown policy '" + name + "'");
}

}  // namespace rarsched::policy
