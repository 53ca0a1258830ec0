#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "rarsched/experiment.hpp"

using namespace rarsched;

namespace {

int verbosity() {
    const char* v = std::getenv("RARSCHED_LOG");
    if (!v) return 1;
    const std::string s = v;
    if (s == "quiet") return 0;
    if (s == "debug") return 2;
    return 1;
}

// "gen:key=value,key=value" option values for --cluster / --trace.
std::map<std::string, std::string> parse_genspec(const std::string& spec) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("expected key=value in generator spec, got '" + item + "'");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

sim::ClusterSpec cluster_spec_from(const std::map<std::string, std::string>& kv, bool gpu_only,
                                   std::uint64_t seed) {
    sim::ClusterSpec cs;
    cs.gpu_only = gpu_only;
    cs.seed = seed;
    for (const auto& [k, v] : kv) {
        if (k == "servers") cs.servers = std::stoi(v);
        else if (k == "rackmin") cs.rack_min = std::stoi(v);
        else if (k == "rackmax") cs.rack_max = std::stoi(v);
        else if (k == "memgpu") cs.mem_per_gpu = std::stoi(v);
        else if (k == "seed") cs.seed = std::stoull(v);
        else throw CLI::ValidationError("unknown cluster generator key '" + k + "'");
    }
    return cs;
}

sim::TraceSpec trace_spec_from(const std::map<std::string, std::string>& kv, int horizon,
                               std::uint64_t seed) {
    sim::TraceSpec ts;
    ts.horizon = horizon;
    ts.seed = seed + 1000003;
    for (const auto& [k, v] : kv) {
        if (k == "jobs") ts.jobs = std::stoi(v);
        else if (k == "arrival") ts.arrival = v;
        else if (k == "span") ts.arrival_span = std::stod(v);
        else if (k == "seed") ts.seed = std::stoull(v);
        else throw CLI::ValidationError("unknown trace generator key '" + k + "'");
    }
    return ts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trace-driven scheduling engine for ring-all-reduce training jobs"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand("run", "Run an experiment scenario");
    std::string scenario = "utility";
    std::vector<std::string> policies;
    std::string cluster_arg = "gen:servers=10";
    std::string trace_arg = "gen:jobs=40";
    std::uint64_t seed = 1;
    int slots = 50;
    double epsilon = 0.5;
    int rounds = 100;
    bool gpu_only = false;
    int trials = 0;
    std::string out_dir = "out";
    run->add_option("--scenario", scenario, "utility | node-ratio | edge-ratio | approx")
        ->check(CLI::IsMember({"utility", "node-ratio", "edge-ratio", "approx"}));
    run->add_option("--policy", policies, "gadget | fifo | drf | las (repeatable)");
    run->add_option("--cluster", cluster_arg, "cluster JSON file or gen:key=value,...");
    run->add_option("--trace", trace_arg, "trace CSV file or gen:key=value,...");
    run->add_option("--seed", seed, "base RNG seed");
    run->add_option("--slots", slots, "horizon T");
    run->add_option("--epsilon", epsilon, "violation-factor scaling");
    run->add_option("--rounds", rounds, "rounding round budget u_b");
    run->add_option("--trials", trials, "number of seeds (default: scenario-specific)");
    run->add_flag("--gpu-only", gpu_only, "model GPUs as the only resource");
    run->add_option("--out", out_dir, "output directory for CSVs and run logs");

    // --- validate ---
    auto* validate = app.add_subcommand("validate", "Replay and audit a run log");
    std::string schedule_path;
    validate->add_option("--schedule", schedule_path, "run log JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (validate->parsed()) {
            const sim::RunLog log = sim::load_runlog(schedule_path);
            const sim::AuditReport report = sim::audit_runlog(log);
            if (verbosity() >= 1)
                std::cout << "audited " << report.slots_checked << " slots, "
                          << report.errors.size() << " problem(s)\n";
            for (const auto& e : report.errors) std::cout << "  " << e << "\n";
            return report.ok ? 0 : 2;
        }

        sim::ExperimentConfig cfg;
        cfg.gvne.epsilon = epsilon;
        cfg.gvne.rounding_rounds = rounds;
        cfg.out_dir = out_dir;
        if (!policies.empty()) cfg.policies = policies;
        std::filesystem::create_directories(out_dir);

        const bool gen_cluster = cluster_arg.rfind("gen:", 0) == 0;
        const bool gen_trace = trace_arg.rfind("gen:", 0) == 0;
        if (gen_cluster)
            cfg.cluster = cluster_spec_from(parse_genspec(cluster_arg.substr(4)), gpu_only, seed);
        if (gen_trace) cfg.trace = trace_spec_from(parse_genspec(trace_arg.substr(4)), slots, seed);
        cfg.trace.horizon = slots;

        const int default_trials = scenario == "approx" ? 20 : (scenario == "utility" ? 1 : 3);
        const int n_trials = trials > 0 ? trials : default_trials;
        cfg.seeds.clear();
        for (int i = 0; i < n_trials; ++i) cfg.seeds.push_back(seed + i);

        if (scenario == "approx") {
            const auto rows = sim::run_approx_scenario(cfg);
            sim::write_approx_csv(out_dir + "/approx.csv", rows);
            if (verbosity() >= 1) {
                double mean = 0;
                for (const auto& r : rows) mean += r.ratio;
                std::cout << "approx: " << rows.size() << " instances, mean ratio "
                          << (rows.empty() ? 0.0 : mean / rows.size()) << " -> " << out_dir
                          << "/approx.csv\n";
            }
            return 0;
        }

        // The remaining scenarios run full traces; file inputs bypass the
        // generators and pin the instance across seeds.
        if (!gen_cluster || !gen_trace) {
            SubstrateNetwork net = gen_cluster ? sim::generate_cluster(cfg.cluster)
                                               : sim::load_cluster(cluster_arg);
            std::vector<Job> jobs = gen_trace
                                        ? sim::generate_trace(cfg.trace, net.registry())
                                        : sim::load_trace(trace_arg, net.registry());
            std::vector<sim::UtilityRow> rows;
            for (std::uint64_t s : cfg.seeds) {
                for (const auto& policy : cfg.policies) {
                    sim::RunLog log =
                        sim::single_run(net, jobs, policy, slots, s, cfg.gvne, cfg.fixed_workers);
                    sim::save_runlog(out_dir + "/run_" + policy + "_s" + std::to_string(s) + ".json",
                                     log);
                    rows.push_back({policy, static_cast<int>(jobs.size()), s, log.result.objective});
                }
            }
            sim::write_utility_csv(out_dir + "/utility.csv", rows);
            return 0;
        }

        if (scenario == "utility") {
            const auto rows = sim::run_utility_scenario(cfg);
            sim::write_utility_csv(out_dir + "/utility.csv", rows);
            if (verbosity() >= 1)
                std::cout << rows.size() << " runs -> " << out_dir << "/utility.csv\n";
        } else {
            const std::string which = scenario == "node-ratio" ? "node" : "edge";
            const auto rows = sim::run_capacity_sweep(cfg, which);
            sim::write_ratio_csv(out_dir + "/" + which + "_ratio.csv", rows);
            if (verbosity() >= 1)
                std::cout << rows.size() << " runs -> " << out_dir << "/" << which << "_ratio.csv\n";
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
