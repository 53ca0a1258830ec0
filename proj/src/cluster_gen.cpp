#include "rarsched/cluster_gen.hpp"

#include <random>
#include <stdexcept>

namespace rarsched::sim {

void ClusterSpec::validate() const {
    if (servers < 1) throw std::invalid_argument("cluster needs at least one server");
    if (rack_min < 1 || rack_max < rack_min) throw std::invalid_argument("bad rack count range");
    if (gpu_choices.empty()) throw std::invalid_argument("empty GPU choice set");
    if (server_rack_bw_min <= 0 || server_rack_bw_max < server_rack_bw_min ||
        rack_core_bw_min <= 0 || rack_core_bw_max < rack_core_bw_min)
        throw std::invalid_argument("bad bandwidth range");
    if (mem_per_gpu < 1) throw std::invalid_argument("memory per GPU must be >= 1");
}

SubstrateNetwork generate_cluster(const ClusterSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    const ResourceRegistry reg =
        spec.gpu_only ? ResourceRegistry::gpu_only() : ResourceRegistry::gpu_mem();
    SubstrateNetwork net(reg);

    std::uniform_int_distribution<int> rack_count_dist(spec.rack_min, spec.rack_max);
    const int racks = std::min(spec.servers, rack_count_dist(rng));

    std::uniform_int_distribution<std::size_t> gpu_pick(0, spec.gpu_choices.size() - 1);
    std::uniform_int_distribution<int> rack_pick(0, racks - 1);

    std::vector<int> server_rack(spec.servers);
    for (int s = 0; s < spec.servers; ++s)
        server_rack[s] = s < racks ? s : rack_pick(rng);  // every rack gets a server

    std::vector<NodeId> server_ids;
    for (int s = 0; s < spec.servers; ++s) {
        const int gpus = spec.gpu_choices[gpu_pick(rng)];
        ResourceVector cap(reg.size());
        cap[0] = gpus;
        if (!spec.gpu_only) cap[1] = gpus * spec.mem_per_gpu;
        server_ids.push_back(net.add_server(cap, server_rack[s]));
    }

    if (spec.servers == 1) return net;  // a lone server needs no fabric

    std::vector<NodeId> rack_ids;
    for (int r = 0; r < racks; ++r) rack_ids.push_back(net.add_switch("rack" + std::to_string(r)));
    const NodeId core = net.add_switch("core");

    std::uniform_real_distribution<double> sr_bw(spec.server_rack_bw_min, spec.server_rack_bw_max);
    std::uniform_real_distribution<double> rc_bw(spec.rack_core_bw_min, spec.rack_core_bw_max);
    for (int s = 0; s < spec.servers; ++s)
        net.add_link(server_ids[s], rack_ids[server_rack[s]], sr_bw(rng));
    for (int r = 0; r < racks; ++r) net.add_link(rack_ids[r], core, rc_bw(rng));

    net.validate();
    return net;
}

}  // namespace rarsched::sim
