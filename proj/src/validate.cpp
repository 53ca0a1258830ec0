#include "rarsched/validate.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace rarsched {

bool validate_ring(const Embedding& emb, const SubstrateNetwork& net) {
    // Co-located hops carry no substrate traffic; only inter-server hops count
    // toward the degree of a hosting server.
    if (emb.kappa == 1) return true;
    std::set<NodeId> distinct(emb.hosts.begin(), emb.hosts.end());
    if (distinct.size() == 1) return true;

    std::map<NodeId, int> out_deg, in_deg;
    std::map<NodeId, NodeId> next;  // successor server along the single outgoing hop
    for (int a = 0; a < emb.kappa; ++a) {
        const NodeId from = emb.hosts[a];
        const NodeId to = emb.hosts[(a + 1) % emb.kappa];
        if (from == to) continue;
        out_deg[from] += 1;
        in_deg[to] += 1;
        next[from] = to;
    }
    for (NodeId s : distinct)
        if (out_deg[s] != 1 || in_deg[s] != 1) return false;

    // All hosting servers must lie on one cycle.
    NodeId start = *distinct.begin();
    NodeId at = start;
    std::size_t visited = 0;
    do {
        at = next.at(at);
        ++visited;
        if (visited > distinct.size()) return false;
    } while (at != start);
    return visited == distinct.size();
}

namespace {

std::string kind_name(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::WorkerCap: return "worker-cap";
        case Violation::Kind::NodeCapacity: return "node-capacity";
        case Violation::Kind::EdgeCapacity: return "edge-capacity";
        case Violation::Kind::RingTopology: return "ring-topology";
        case Violation::Kind::BudgetHeadroom: return "budget-headroom";
        case Violation::Kind::BeforeArrival: return "before-arrival";
    }
    return "?";
}

}  // namespace

std::string violation_to_string(const Violation& v) {
    std::ostringstream os;
    os << kind_name(v.kind);
    if (v.job >= 0) os << " job=" << v.job;
    if (v.node >= 0) os << " node=" << v.node;
    if (v.edge >= 0) os << " edge=" << v.edge;
    os << " amount=" << v.amount << " limit=" << v.limit;
    if (!v.detail.empty()) os << " (" << v.detail << ")";
    return os.str();
}

std::vector<Violation> validate_slot(const SlotAllocation& alloc,
                                     const std::vector<Job>& jobs,
                                     const SubstrateNetwork& net,
                                     const std::map<JobId, double>& z_prev,
                                     const CapacityMultipliers& mult) {
    constexpr double kTol = 1e-9;
    std::vector<Violation> out;

    std::map<JobId, const Job*> by_id;
    for (const auto& j : jobs) by_id[j.id] = &j;

    // Structural pass first: a malformed embedding is an error, not a violation.
    for (const auto& [jid, emb] : alloc.embeddings) {
        auto it = by_id.find(jid);
        if (it == by_id.end()) throw MalformedAllocation("allocation references unknown job " + std::to_string(jid));
        if (emb.job != jid) throw MalformedAllocation("embedding job id mismatch");
        try {
            emb.validate_structure(net);
        } catch (const std::invalid_argument& e) {
            throw MalformedAllocation(std::string("job ") + std::to_string(jid) + ": " + e.what());
        }
    }

    const std::size_t nres = net.registry().size();
    std::vector<std::vector<double>> node_load(net.node_count(), std::vector<double>(nres, 0.0));
    std::vector<double> edge_load(net.edge_count(), 0.0);

    for (const auto& [jid, emb] : alloc.embeddings) {
        const Job& job = *by_id.at(jid);
        const int total_workers = emb.kappa;

        if (alloc.t < job.arrival) {
            out.push_back({Violation::Kind::BeforeArrival, jid, -1, -1,
                           static_cast<double>(total_workers), 0.0,
                           "arrival at slot " + std::to_string(job.arrival)});
        }
        if (total_workers > job.max_workers) {
            out.push_back({Violation::Kind::WorkerCap, jid, -1, -1,
                           static_cast<double>(total_workers),
                           static_cast<double>(job.max_workers), ""});
        }
        double z = 0.0;
        if (auto it = z_prev.find(jid); it != z_prev.end()) z = it->second;
        const double headroom = job.worker_time_budget() - z;
        if (total_workers > headroom + kTol) {
            out.push_back({Violation::Kind::BudgetHeadroom, jid, -1, -1,
                           static_cast<double>(total_workers), headroom, ""});
        }
        if (!validate_ring(emb, net)) {
            out.push_back({Violation::Kind::RingTopology, jid, -1, -1, 0.0, 0.0,
                           "hosting servers do not form a single cycle"});
        }

        const ServerCounts counts = derive_counts(emb);
        for (const auto& [s, y] : counts.workers)
            for (std::size_t r = 0; r < nres; ++r) node_load[s][r] += job.demand[r] * y;
        for (const auto& path : emb.paths)
            for (EdgeId e : path) edge_load[e] += job.bandwidth_bps;
    }

    for (NodeId u = 0; u < static_cast<NodeId>(net.node_count()); ++u) {
        for (std::size_t r = 0; r < nres; ++r) {
            const double limit = mult.node_factor(r) * net.node(u).capacity[r];
            if (node_load[u][r] > limit + kTol) {
                out.push_back({Violation::Kind::NodeCapacity, -1, u, -1, node_load[u][r], limit,
                               net.registry().name(r)});
            }
        }
    }
    for (EdgeId e = 0; e < static_cast<EdgeId>(net.edge_count()); ++e) {
        const double limit = mult.edge * net.edge(e).bandwidth_bps;
        if (edge_load[e] > limit * (1.0 + 1e-12) + kTol) {
            out.push_back({Violation::Kind::EdgeCapacity, -1, -1, e, edge_load[e], limit, ""});
        }
    }
    return out;
}

}  // namespace rarsched
