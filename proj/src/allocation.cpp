#include "rarsched/allocation.hpp"

namespace rarsched {

ServerCounts derive_counts(const Embedding& emb) {
    ServerCounts c;
    for (NodeId h : emb.hosts) c.workers[h] += 1;
    for (const auto& [s, y] : c.workers)
        if (y >= 1) c.used[s] = 1;
    return c;
}

}  // namespace rarsched
