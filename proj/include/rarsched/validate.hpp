#pragma once

#include <map>
#include <string>
#include <vector>

#include "rarsched/allocation.hpp"
#include "rarsched/job.hpp"
#include "rarsched/substrate.hpp"

namespace rarsched {

/// Raised when an allocation is malformed (broken embedding structure),
/// as opposed to merely violating a scheduling constraint.
struct MalformedAllocation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Violation {
    enum class Kind {
        WorkerCap,       // sum_s y_is > N_i
        NodeCapacity,    // sum_i l^r y_is > beta^r * C_s^r
        EdgeCapacity,    // aggregated bandwidth > gamma * e^{u,v}
        RingTopology,    // embedding does not form a single ring
        BudgetHeadroom,  // slot workers exceed remaining worker-time budget
        BeforeArrival,   // workers allocated before a_i
    };
    Kind kind;
    JobId job = -1;     // -1 for aggregate (node/edge) violations
    int node = -1;      // substrate node for NodeCapacity
    int edge = -1;      // substrate edge for EdgeCapacity
    double amount = 0;  // load or count observed
    double limit = 0;   // the bound it was checked against
    std::string detail;
};

/// Multiplicative slack on capacities permitted to rounded solutions.
struct CapacityMultipliers {
    std::vector<double> node;  // beta^r per resource type; empty = all 1
    double edge = 1.0;         // gamma_edge

    static CapacityMultipliers ones() { return {}; }
    double node_factor(std::size_t r) const { return r < node.size() ? node[r] : 1.0; }
};

/// True iff the embedding's workers form one ring: either all on one server,
/// or the per-server contraction is a single directed cycle in which every
/// hosting server has inter-server path degree exactly two (one in, one out).
bool validate_ring(const Embedding& emb, const SubstrateNetwork& net);

/// Checks every per-slot constraint for the allocation: worker caps, node
/// capacities, per-edge aggregated bandwidth, ring validity, budget headroom
/// and arrival causality. Capacity rows are checked against multiplier-
/// relaxed limits. Returns the (possibly empty) violation list.
/// Throws MalformedAllocation if an embedding is structurally inconsistent.
std::vector<Violation> validate_slot(const SlotAllocation& alloc,
                                     const std::vector<Job>& jobs,
                                     const SubstrateNetwork& net,
                                     const std::map<JobId, double>& z_prev,
                                     const CapacityMultipliers& mult = CapacityMultipliers::ones());

std::string violation_to_string(const Violation& v);

}  // namespace rarsched
