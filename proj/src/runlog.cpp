#include "rarsched/runlog.hpp"

#include <fstream>

#include "json.hpp"

namespace rarsched::sim {

using nlohmann::json;

namespace {

json net_to_json(const SubstrateNetwork& net) {
    json j;
    json names = json::array();
    for (std::size_t r = 0; r < net.registry().size(); ++r) names.push_back(net.registry().name(r));
    j["resources"] = names;
    j["nodes"] = json::array();
    for (const auto& n : net.nodes()) {
        json cap = json::array();
        for (std::size_t r = 0; r < n.capacity.size(); ++r) cap.push_back(n.capacity[r]);
        j["nodes"].push_back({{"id", n.id},
                              {"kind", n.kind == NodeKind::Server ? "server" : "switch"},
                              {"capacity", cap},
                              {"rack", n.rack},
                              {"name", n.name}});
    }
    j["edges"] = json::array();
    for (const auto& e : net.edges())
        j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"bandwidth_bps", e.bandwidth_bps}});
    return j;
}

SubstrateNetwork net_from_json(const json& j) {
    std::vector<std::string> names = j.at("resources").get<std::vector<std::string>>();
    SubstrateNetwork net{ResourceRegistry(names)};
    for (const auto& n : j.at("nodes")) {
        if (n.at("kind") == "server") {
            ResourceVector cap(names.size());
            for (std::size_t r = 0; r < names.size(); ++r) cap[r] = n.at("capacity")[r];
            net.add_server(cap, n.at("rack"), n.at("name"));
        } else {
            net.add_switch(n.at("name"));
        }
    }
    for (const auto& e : j.at("edges"))
        net.add_edge(e.at("from"), e.at("to"), e.at("bandwidth_bps"));
    return net;
}

json job_to_json(const Job& job) {
    json j;
    j["id"] = job.id;
    j["arrival"] = job.arrival;
    j["max_workers"] = job.max_workers;
    j["demand"] = json::array();
    j["budget"] = json::array();
    for (std::size_t r = 0; r < job.demand.size(); ++r) {
        j["demand"].push_back(job.demand[r]);
        j["budget"].push_back(job.budget[r]);
    }
    j["bandwidth_bps"] = job.bandwidth_bps;
    j["efficiency"] = job.efficiency;
    j["utility"] = {{"kind", utility_kind_name(job.utility)}, {"params", utility_params(job.utility)}};
    return j;
}

Job job_from_json(const json& j, std::size_t nres) {
    Job job;
    job.id = j.at("id");
    job.arrival = j.at("arrival");
    job.max_workers = j.at("max_workers");
    job.demand = ResourceVector(nres);
    job.budget = ResourceVector(nres);
    for (std::size_t r = 0; r < nres; ++r) {
        job.demand[r] = j.at("demand")[r];
        job.budget[r] = j.at("budget")[r];
    }
    job.bandwidth_bps = j.at("bandwidth_bps");
    job.efficiency = j.at("efficiency");
    job.utility = make_utility(j.at("utility").at("kind"),
                               j.at("utility").at("params").get<std::vector<double>>());
    return job;
}

json factors_to_json(const gvne::ViolationFactors& f) {
    return {{"epsilon", f.epsilon},
            {"beta", f.beta},
            {"gamma_edge", f.gamma_edge},
            {"delta_node", f.delta_node},
            {"delta_edge", f.delta_edge}};
}

gvne::ViolationFactors factors_from_json(const json& j) {
    gvne::ViolationFactors f;
    f.epsilon = j.at("epsilon");
    f.beta = j.at("beta").get<std::vector<double>>();
    f.gamma_edge = j.at("gamma_edge");
    f.delta_node = j.at("delta_node").get<std::vector<double>>();
    f.delta_edge = j.at("delta_edge");
    return f;
}

}  // namespace

void save_cluster(const std::string& path, const SubstrateNetwork& net) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write cluster file " + path);
    out << net_to_json(net).dump(1) << "\n";
}

SubstrateNetwork load_cluster(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cluster file " + path);
    json j;
    in >> j;
    SubstrateNetwork net = net_from_json(j);
    net.validate();
    return net;
}

void save_runlog(const std::string& path, const RunLog& log) {
    json j;
    j["config"] = {{"policy", log.policy},
                   {"seed", log.seed},
                   {"horizon", log.horizon},
                   {"epsilon", log.epsilon},
                   {"rounding_rounds", log.rounding_rounds},
                   {"alpha", log.alpha},
                   {"fixed_workers", log.fixed_workers},
                   {"gpu_only", log.gpu_only}};
    j["cluster"] = net_to_json(log.net);
    j["jobs"] = json::array();
    for (const Job& job : log.jobs) j["jobs"].push_back(job_to_json(job));

    j["slots"] = json::array();
    for (std::size_t k = 0; k < log.result.schedule.slots().size(); ++k) {
        const auto& slot = log.result.schedule.slots()[k];
        json js;
        js["t"] = slot.t;
        js["allocations"] = json::object();
        for (const auto& [jid, emb] : slot.embeddings) {
            js["allocations"][std::to_string(jid)] = {
                {"kappa", emb.kappa}, {"hosts", emb.hosts}, {"paths", emb.paths}};
        }
        if (k < log.result.diagnostics.size()) {
            const auto& d = log.result.diagnostics[k];
            json vj = json::array();
            for (const auto& v : d.violations) vj.push_back(violation_to_string(v));
            js["diagnostics"] = {{"ilp_objective", d.ilp_objective},
                                 {"augmented_objective", d.augmented_objective},
                                 {"utility", d.utility},
                                 {"rounds_used", d.rounds_used},
                                 {"accepted", d.accepted},
                                 {"dropped_jobs", d.dropped_jobs},
                                 {"excluded", d.excluded},
                                 {"notes", d.notes},
                                 {"violations", vj},
                                 {"factors", factors_to_json(d.factors)}};
            json kap = json::object();
            for (const auto& [jid, kv] : d.selected_kappa) kap[std::to_string(jid)] = kv;
            js["diagnostics"]["selected_kappa"] = kap;
        }
        if (k < log.result.active_count.size()) {
            js["active_jobs"] = log.result.active_count[k];
            js["embedded_jobs"] = log.result.embedded_count[k];
        }
        j["slots"].push_back(std::move(js));
    }
    j["objective"] = log.result.objective;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write run log " + path);
    out << j.dump(1) << "\n";
}

RunLog load_runlog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open run log " + path);
    json j;
    in >> j;

    RunLog log;
    const auto& c = j.at("config");
    log.policy = c.at("policy");
    log.seed = c.at("seed");
    log.horizon = c.at("horizon");
    log.epsilon = c.at("epsilon");
    log.rounding_rounds = c.at("rounding_rounds");
    log.alpha = c.at("alpha");
    log.fixed_workers = c.at("fixed_workers");
    log.gpu_only = c.at("gpu_only");
    log.net = net_from_json(j.at("cluster"));
    for (const auto& jj : j.at("jobs")) log.jobs.push_back(job_from_json(jj, log.net.registry().size()));

    for (const auto& js : j.at("slots")) {
        SlotAllocation slot;
        slot.t = js.at("t");
        for (auto it = js.at("allocations").begin(); it != js.at("allocations").end(); ++it) {
            Embedding emb;
            emb.job = std::stoi(it.key());
            emb.kappa = it.value().at("kappa");
            emb.hosts = it.value().at("hosts").get<std::vector<NodeId>>();
            emb.paths = it.value().at("paths").get<std::vector<std::vector<EdgeId>>>();
            slot.embeddings[emb.job] = std::move(emb);
        }
        gvne::SlotDiagnostics diag;
        if (js.contains("diagnostics")) {
            const auto& d = js.at("diagnostics");
            diag.ilp_objective = d.at("ilp_objective");
            diag.augmented_objective = d.at("augmented_objective");
            diag.utility = d.at("utility");
            diag.rounds_used = d.at("rounds_used");
            diag.accepted = d.at("accepted");
            diag.dropped_jobs = d.at("dropped_jobs");
            diag.excluded = d.at("excluded").get<std::vector<JobId>>();
            diag.notes = d.at("notes").get<std::vector<std::string>>();
            diag.factors = factors_from_json(d.at("factors"));
        }
        if (js.contains("active_jobs")) {
            log.result.active_count.push_back(js.at("active_jobs"));
            log.result.embedded_count.push_back(js.at("embedded_jobs"));
        }
        log.result.schedule.append(std::move(slot));
        log.result.diagnostics.push_back(std::move(diag));
    }
    log.result.objective = j.at("objective");
    return log;
}

AuditReport audit_runlog(const RunLog& log) {
    AuditReport report;
    std::map<JobId, double> z;
    for (const Job& j : log.jobs) z[j.id] = 0.0;

    for (const auto& slot : log.result.schedule.slots()) {
        const std::size_t idx = static_cast<std::size_t>(slot.t - 1);
        CapacityMultipliers mult = idx < log.result.diagnostics.size()
                                       ? log.result.diagnostics[idx].factors.multipliers()
                                       : CapacityMultipliers::ones();
        try {
            auto violations = validate_slot(slot, log.jobs, log.net, z, mult);
            for (const auto& v : violations)
                report.errors.push_back("slot " + std::to_string(slot.t) + ": " +
                                        violation_to_string(v));
        } catch (const std::exception& e) {
            report.errors.push_back("slot " + std::to_string(slot.t) + ": malformed: " + e.what());
        }
        for (const auto& [jid, emb] : slot.embeddings) z[jid] += emb.kappa;
        ++report.slots_checked;
    }

    // Budget audit, exact: sum_t l^r * workers <= F^r for every resource.
    for (const Job& j : log.jobs) {
        for (std::size_t r = 0; r < j.demand.size(); ++r) {
            const double used = j.demand[r] * z[j.id];
            if (used > j.budget[r] + 1e-9)
                report.errors.push_back("job " + std::to_string(j.id) + ": budget exceeded for " +
                                        log.net.registry().name(r) + " (" + std::to_string(used) +
                                        " > " + std::to_string(j.budget[r]) + ")");
        }
    }
    report.ok = report.errors.empty();
    return report;
}

}  // namespace rarsched::sim
