#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <queue>
#include <random>
#include <set>

#include "rarsched/allocation.hpp"
#include "rarsched/validate.hpp"

using namespace rarsched;

namespace {

SubstrateNetwork triangle(double gpu_per_server = 4.0, double bw = 10e9) {
    SubstrateNetwork net{ResourceRegistry::gpu_only()};
    for (int i = 0; i < 3; ++i) net.add_server(ResourceVector{gpu_per_server});
    net.add_link(0, 1, bw);
    net.add_link(1, 2, bw);
    net.add_link(2, 0, bw);
    net.validate();
    return net;
}

Job simple_job(JobId id, double gpu = 1.0, int max_workers = 3, double budget = 100.0) {
    Job j;
    j.id = id;
    j.arrival = 1;
    j.max_workers = max_workers;
    j.demand = ResourceVector{gpu};
    j.budget = ResourceVector{budget};
    j.bandwidth_bps = 1e9;
    j.efficiency = 1.0;
    j.utility = SqrtUtility{1.0};
    return j;
}

Embedding direct_ring(JobId job, const SubstrateNetwork& net, const std::vector<NodeId>& hosts) {
    Embedding emb;
    emb.job = job;
    emb.kappa = static_cast<int>(hosts.size());
    emb.hosts = hosts;
    if (emb.kappa >= 2) {
        emb.paths.resize(emb.kappa);
        for (int a = 0; a < emb.kappa; ++a) {
            NodeId from = hosts[a], to = hosts[(a + 1) % emb.kappa];
            if (from == to) continue;
            EdgeId e = net.find_edge(from, to);
            REQUIRE(e >= 0);
            emb.paths[a] = {e};
        }
    }
    return emb;
}

SubstrateNetwork full_mesh(int n, double gpu = 4.0) {
    SubstrateNetwork net{ResourceRegistry::gpu_only()};
    for (int i = 0; i < n; ++i) net.add_server(ResourceVector{gpu});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) net.add_edge(i, j, 10e9);
    net.validate();
    return net;
}

}  // namespace

TEST_CASE("substrate validators") {
    SubstrateNetwork net{ResourceRegistry::gpu_only()};
    net.add_server(ResourceVector{2.0});
    CHECK_NOTHROW(net.validate());  // single node, no links

    CHECK_NOTHROW(triangle().validate());

    SubstrateNetwork disconnected{ResourceRegistry::gpu_only()};
    disconnected.add_server(ResourceVector{1.0});
    disconnected.add_server(ResourceVector{1.0});
    disconnected.add_edge(0, 1, 1e9);  // one-way only
    CHECK_THROWS_AS(disconnected.validate(), std::invalid_argument);

    SubstrateNetwork negative{ResourceRegistry::gpu_only()};
    CHECK_THROWS_AS(negative.add_server(ResourceVector{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("derive_counts") {
    auto net = triangle();
    SUBCASE("single worker") {
        Embedding emb = direct_ring(0, net, {1});
        auto c = derive_counts(emb);
        CHECK(c.workers.at(1) == 1);
        CHECK(c.used.at(1) == 1);
    }
    SUBCASE("two servers") {
        Embedding emb;
        emb.job = 0;
        emb.kappa = 3;
        emb.hosts = {0, 0, 1};
        auto c = derive_counts(emb);
        CHECK(c.workers.at(0) == 2);
        CHECK(c.workers.at(1) == 1);
    }
    SUBCASE("empty embedding") {
        Embedding emb;
        auto c = derive_counts(emb);
        CHECK(c.workers.empty());
        CHECK(c.used.empty());
    }
    SUBCASE("counts sum to kappa") {
        std::mt19937_64 rng(7);
        auto mesh = full_mesh(5);
        std::uniform_int_distribution<int> host(0, 4), kd(1, 8);
        for (int trial = 0; trial < 50; ++trial) {
            Embedding emb;
            emb.kappa = kd(rng);
            for (int a = 0; a < emb.kappa; ++a) emb.hosts.push_back(host(rng));
            auto c = derive_counts(emb);
            int total = 0;
            for (auto& [s, y] : c.workers) total += y;
            CHECK(total == emb.kappa);
        }
    }
}

TEST_CASE("ring validity") {
    auto net = triangle();
    SUBCASE("all workers on one server") {
        CHECK(validate_ring(direct_ring(0, net, {1, 1, 1}), net));
    }
    SUBCASE("cycle over three servers") {
        CHECK(validate_ring(direct_ring(0, net, {0, 1, 2}), net));
    }
    SUBCASE("two small cycles are rejected") {
        auto square = full_mesh(4);
        CHECK(validate_ring(direct_ring(0, square, {0, 1, 2, 3}), square));

        // Host pattern 0,1,0,2 visits server 0 in two separate runs: its
        // inter-server degree is four, two small loops instead of one cycle.
        Embedding split = direct_ring(0, square, {0, 1, 0, 2});
        CHECK_FALSE(validate_ring(split, square));
    }
    SUBCASE("rotation invariance") {
        auto mesh = full_mesh(3);
        std::vector<NodeId> hosts = {0, 0, 1, 2};
        for (std::size_t rot = 0; rot < hosts.size(); ++rot) {
            std::vector<NodeId> rotated;
            for (std::size_t k = 0; k < hosts.size(); ++k)
                rotated.push_back(hosts[(k + rot) % hosts.size()]);
            CHECK(validate_ring(direct_ring(0, mesh, rotated), mesh));
        }
    }
}

namespace {

// Independent cycle oracle: contract workers per server, then check the
// quotient multigraph is one directed cycle via arc counting plus transitive
// closure (distinct machinery from the production successor walk).
bool ring_oracle(const Embedding& emb, const SubstrateNetwork&) {
    if (emb.kappa == 1) return true;
    std::set<NodeId> hosts(emb.hosts.begin(), emb.hosts.end());
    if (hosts.size() == 1) return true;
    std::map<NodeId, int> out_count, in_count;
    std::set<std::pair<NodeId, NodeId>> arcs;
    int arc_total = 0;
    for (int a = 0; a < emb.kappa; ++a) {
        NodeId u = emb.hosts[a], v = emb.hosts[(a + 1) % emb.kappa];
        if (u == v) continue;
        ++out_count[u];
        ++in_count[v];
        arcs.insert({u, v});
        ++arc_total;
    }
    if (arc_total != static_cast<int>(hosts.size())) return false;
    for (NodeId h : hosts)
        if (out_count[h] != 1 || in_count[h] != 1) return false;
    for (NodeId mid : hosts) {
        std::set<std::pair<NodeId, NodeId>> grown = arcs;
        for (auto [a, b] : arcs)
            if (b == mid)
                for (auto [c, d] : arcs)
                    if (c == mid) grown.insert({a, d});
        arcs = grown;
    }
    for (NodeId a : hosts)
        for (NodeId b : hosts)
            if (a != b && !arcs.count({a, b})) return false;
    return true;
}

}  // namespace

TEST_CASE("ring validity agrees with an independent oracle on 500 random embeddings") {
    std::mt19937_64 rng(20240817);
    // Random 10-node substrate: a directed ring guarantees strong
    // connectivity, plus random chords.
    SubstrateNetwork net{ResourceRegistry::gpu_only()};
    for (int i = 0; i < 10; ++i) net.add_server(ResourceVector{8.0});
    for (int i = 0; i < 10; ++i) net.add_edge(i, (i + 1) % 10, 10e9);
    std::uniform_int_distribution<int> node(0, 9);
    for (int k = 0; k < 30; ++k) {
        int a = node(rng), b = node(rng);
        if (a != b && net.find_edge(a, b) < 0) net.add_edge(a, b, 10e9);
    }
    net.validate();

    auto shortest = [&](NodeId from, NodeId to) {
        std::vector<EdgeId> parent(net.node_count(), -1);
        std::vector<char> seen(net.node_count(), 0);
        std::queue<NodeId> q;
        q.push(from);
        seen[from] = 1;
        while (!q.empty()) {
            NodeId u = q.front();
            q.pop();
            for (EdgeId e : net.out_edges(u)) {
                NodeId v = net.edge(e).to;
                if (!seen[v]) {
                    seen[v] = 1;
                    parent[v] = e;
                    q.push(v);
                }
            }
        }
        std::vector<EdgeId> path;
        for (NodeId at = to; at != from; at = net.edge(parent[at]).from) path.push_back(parent[at]);
        std::reverse(path.begin(), path.end());
        return path;
    };

    std::uniform_int_distribution<int> kappa_dist(1, 6);
    int agreements = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const int kappa = kappa_dist(rng);
        Embedding emb;
        emb.job = 0;
        emb.kappa = kappa;
        for (int a = 0; a < kappa; ++a) emb.hosts.push_back(node(rng));
        if (kappa >= 2) {
            emb.paths.resize(kappa);
            for (int a = 0; a < kappa; ++a) {
                NodeId from = emb.hosts[a], to = emb.hosts[(a + 1) % kappa];
                if (from != to) emb.paths[a] = shortest(from, to);
            }
        }
        emb.validate_structure(net);
        if (validate_ring(emb, net) == ring_oracle(emb, net)) ++agreements;
    }
    CHECK(agreements == 500);
}

TEST_CASE("validate_slot") {
    auto net = triangle(4.0);
    std::vector<Job> jobs = {simple_job(0), simple_job(1, 3.0, 3)};
    std::map<JobId, double> z;

    SUBCASE("empty allocation has no violations") {
        SlotAllocation alloc;
        alloc.t = 1;
        CHECK(validate_slot(alloc, jobs, net, z).empty());
    }
    SUBCASE("three workers on one four-GPU server") {
        SlotAllocation alloc;
        alloc.t = 1;
        alloc.embeddings[0] = direct_ring(0, net, {0, 0, 0});
        CHECK(validate_slot(alloc, jobs, net, z).empty());
    }
    SUBCASE("two jobs demanding three GPUs each overload a four-GPU server") {
        std::vector<Job> heavy = {simple_job(0, 3.0, 1), simple_job(1, 3.0, 1)};
        SlotAllocation alloc;
        alloc.t = 1;
        alloc.embeddings[0] = direct_ring(0, net, {0});
        alloc.embeddings[1] = direct_ring(1, net, {0});
        auto violations = validate_slot(alloc, heavy, net, z);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].kind == Violation::Kind::NodeCapacity);
        CHECK(violations[0].node == 0);
        CHECK(violations[0].amount == doctest::Approx(6.0));
        // A node multiplier of 1.5 absorbs exactly that load.
        CapacityMultipliers mult;
        mult.node = {1.5};
        CHECK(validate_slot(alloc, heavy, net, z, mult).empty());
    }
    SUBCASE("worker cap and budget headroom") {
        SlotAllocation alloc;
        alloc.t = 1;
        alloc.embeddings[0] = direct_ring(0, net, {0, 0, 0, 0});
        auto violations = validate_slot(alloc, jobs, net, z);
        bool saw_cap = false;
        for (const auto& v : violations) saw_cap |= v.kind == Violation::Kind::WorkerCap;
        CHECK(saw_cap);

        z[0] = 99.0;  // headroom 1 left of the 100 budget
        alloc.embeddings[0] = direct_ring(0, net, {0, 0});
        violations = validate_slot(alloc, jobs, net, z);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].kind == Violation::Kind::BudgetHeadroom);
    }
    SUBCASE("workers before arrival") {
        std::vector<Job> late = {simple_job(0)};
        late[0].arrival = 5;
        SlotAllocation alloc;
        alloc.t = 3;
        alloc.embeddings[0] = direct_ring(0, net, {0});
        auto violations = validate_slot(alloc, late, net, z);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].kind == Violation::Kind::BeforeArrival);
    }
    SUBCASE("edge bandwidth aggregation") {
        auto thin = triangle(4.0, 1.5e9);  // each link fits one reservation, not two
        std::vector<Job> pair = {simple_job(0), simple_job(1)};
        SlotAllocation alloc;
        alloc.t = 1;
        alloc.embeddings[0] = direct_ring(0, thin, {0, 1, 2});
        alloc.embeddings[1] = direct_ring(1, thin, {0, 1, 2});
        auto violations = validate_slot(alloc, pair, thin, z);
        CHECK(!violations.empty());
        for (const auto& v : violations) CHECK(v.kind == Violation::Kind::EdgeCapacity);
    }
    SUBCASE("malformed embedding is an error, not a violation") {
        SlotAllocation alloc;
        alloc.t = 1;
        Embedding broken = direct_ring(0, net, {0, 1, 2});
        broken.paths[0].clear();  // inter-server hop with no path
        alloc.embeddings[0] = broken;
        CHECK_THROWS_AS(validate_slot(alloc, jobs, net, z), MalformedAllocation);
    }
}

TEST_CASE("schedule accumulators and completion") {
    auto net = triangle();
    Job j = simple_job(0, 1.0, 2, 6.0);
    Schedule sched;
    for (int t = 1; t <= 4; ++t) {
        SlotAllocation alloc;
        alloc.t = t;
        if (t <= 3) alloc.embeddings[0] = direct_ring(0, net, {0, 0});
        sched.append(alloc);
    }
    CHECK(sched.accumulated(0, 0) == 0.0);
    CHECK(sched.accumulated(0, 2) == 4.0);
    CHECK(sched.final_accumulated(0) == 6.0);
    REQUIRE(sched.completion_slot(j).has_value());
    CHECK(*sched.completion_slot(j) == 3);
}

TEST_CASE("job invariants") {
    ResourceRegistry reg = ResourceRegistry::gpu_only();
    Job j = simple_job(0);
    CHECK_NOTHROW(j.validate(reg));
    Job bad = j;
    bad.arrival = 0;
    CHECK_THROWS_AS(bad.validate(reg), std::invalid_argument);
    bad = j;
    bad.budget = ResourceVector{0.5};  // below one worker's demand
    CHECK_THROWS_AS(bad.validate(reg), std::invalid_argument);
    bad = j;
    bad.demand = ResourceVector{0.0};
    CHECK_THROWS_AS(bad.validate(reg), std::invalid_argument);
    CHECK(j.worker_time_budget() == doctest::Approx(100.0));
}
