#include "rarsched/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace rarsched::sim {

void TraceSpec::validate() const {
    if (jobs < 0) throw std::invalid_argument("job count must be >= 0");
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (arrival != "poisson" && arrival != "uniform")
        throw std::invalid_argument("arrival pattern must be poisson or uniform");
    if (arrival_span <= 0 || arrival_span > 1) throw std::invalid_argument("arrival span in (0,1]");
    if (n_min < 1 || n_max < n_min) throw std::invalid_argument("bad worker-count range");
    if (budget_min < 1 || budget_max < budget_min) throw std::invalid_argument("bad budget range");
    if (zeta_min <= 0 || zeta_max < zeta_min) throw std::invalid_argument("bad efficiency range");
    if (bw_min <= 0 || bw_max < bw_min) throw std::invalid_argument("bad bandwidth range");
    if (l2_min <= 0 || l2_max >= 1 || l2_max < l2_min)
        throw std::invalid_argument("sigmoid sensitivity must stay inside (0,1)");
    if (gpu_per_worker < 1 || mem_per_worker_max < 1)
        throw std::invalid_argument("bad per-worker demand");
    if (utility_kind != "sigmoid" && utility_kind != "sqrt" && utility_kind != "log")
        throw std::invalid_argument("utility kind must be sigmoid, sqrt or log");
}

std::vector<Job> generate_trace(const TraceSpec& spec, const ResourceRegistry& reg) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    const bool has_mem = reg.index_of("mem") >= 0;

    // Arrival slots, then ids in arrival order.
    std::vector<int> arrivals;
    const double span = spec.arrival_span * spec.horizon;
    if (spec.arrival == "uniform") {
        std::uniform_int_distribution<int> at(1, std::max(1, static_cast<int>(span)));
        for (int i = 0; i < spec.jobs; ++i) arrivals.push_back(at(rng));
    } else {
        // Bursty pattern: exponential interarrivals at rate jobs/span.
        std::exponential_distribution<double> gap(spec.jobs / std::max(span, 1.0));
        double at = 1.0;
        for (int i = 0; i < spec.jobs; ++i) {
            arrivals.push_back(std::min(spec.horizon, std::max(1, static_cast<int>(at))));
            at += gap(rng);
        }
    }
    std::sort(arrivals.begin(), arrivals.end());

    std::uniform_int_distribution<int> n_dist(spec.n_min, spec.n_max);
    std::uniform_int_distribution<int> f_dist(static_cast<int>(spec.budget_min),
                                              static_cast<int>(spec.budget_max));
    std::uniform_int_distribution<int> zeta_dist(static_cast<int>(spec.zeta_min),
                                                 static_cast<int>(spec.zeta_max));
    std::uniform_int_distribution<int> bw_mbps(static_cast<int>(spec.bw_min / 1e6),
                                               static_cast<int>(spec.bw_max / 1e6));
    std::uniform_real_distribution<double> l1(spec.l1_min, spec.l1_max);
    std::uniform_real_distribution<double> l2(spec.l2_min, spec.l2_max);
    std::uniform_real_distribution<double> l3(spec.l3_min, spec.l3_max);
    std::uniform_int_distribution<int> mem_dist(1, spec.mem_per_worker_max);

    std::vector<Job> jobs;
    for (int i = 0; i < spec.jobs; ++i) {
        Job j;
        j.id = i;
        j.arrival = arrivals[i];
        j.max_workers = n_dist(rng);
        j.demand = ResourceVector(reg.size());
        j.budget = ResourceVector(reg.size());
        j.demand[0] = spec.gpu_per_worker;
        const double f_gpu = f_dist(rng);
        j.budget[0] = f_gpu;
        if (has_mem) {
            j.demand[1] = mem_dist(rng);
            // Budgets aligned across resources so the worker-time cap is the
            // GPU-denominated number regardless of the memory demand.
            j.budget[1] = j.demand[1] * (f_gpu / spec.gpu_per_worker);
        }
        j.bandwidth_bps = static_cast<double>(bw_mbps(rng)) * 1e6;
        j.efficiency = zeta_dist(rng);
        if (spec.utility_kind == "sqrt") {
            std::uniform_real_distribution<double> c(1.0, 10.0);
            j.utility = SqrtUtility{c(rng)};
        } else if (spec.utility_kind == "log") {
            j.utility = LogUtility{};
        } else {
            j.utility = SigmoidUtility{l1(rng), l2(rng), l3(rng)};
        }
        j.validate(reg);
        jobs.push_back(std::move(j));
    }
    return jobs;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return out;
}

double parse_num(const std::string& s, int line_no, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("trace line " + std::to_string(line_no) + ": bad " + what + " '" +
                                 s + "'");
    }
}

double clamp_field(double v, double lo, double hi, const std::string& what, int line_no,
                   TraceLoadReport* report) {
    if (v < lo || v > hi) {
        const double c = std::min(std::max(v, lo), hi);
        if (report)
            report->warnings.push_back("line " + std::to_string(line_no) + ": " + what + " " +
                                       std::to_string(v) + " clamped to " + std::to_string(c));
        return c;
    }
    return v;
}

}  // namespace

std::vector<Job> load_trace(const std::string& path, const ResourceRegistry& reg,
                            TraceLoadReport* report, const std::optional<TraceSpec>& ranges) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file " + path);
    const bool has_mem = reg.index_of("mem") >= 0;

    std::vector<Job> jobs;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line.rfind("id,", 0) != 0)
                throw std::runtime_error("trace line " + std::to_string(line_no) +
                                         ": header row required");
            header_seen = true;
            continue;
        }
        auto f = split_csv(line);
        if (f.size() < 10)
            throw std::runtime_error("trace line " + std::to_string(line_no) +
                                     ": expected at least 10 fields, got " + std::to_string(f.size()));
        Job j;
        j.id = static_cast<JobId>(parse_num(f[0], line_no, "id"));
        j.arrival = static_cast<int>(parse_num(f[1], line_no, "arrival"));
        if (j.arrival < 1)
            throw std::runtime_error("trace line " + std::to_string(line_no) +
                                     ": arrival must be >= 1 (slots are 1-based)");
        double n = parse_num(f[2], line_no, "N");
        double l_gpu = parse_num(f[3], line_no, "l_gpu");
        double l_mem = parse_num(f[4], line_no, "l_mem");
        double f_gpu = parse_num(f[5], line_no, "F_gpu");
        double f_mem = parse_num(f[6], line_no, "F_mem");
        double bw = parse_num(f[7], line_no, "bandwidth_bps");
        double zeta = parse_num(f[8], line_no, "zeta");
        if (ranges) {
            n = clamp_field(n, ranges->n_min, ranges->n_max, "N", line_no, report);
            f_gpu = clamp_field(f_gpu, ranges->budget_min, ranges->budget_max, "F_gpu", line_no, report);
            bw = clamp_field(bw, ranges->bw_min, ranges->bw_max, "bandwidth_bps", line_no, report);
            zeta = clamp_field(zeta, ranges->zeta_min, ranges->zeta_max, "zeta", line_no, report);
        }
        j.max_workers = static_cast<int>(n);
        j.demand = ResourceVector(reg.size());
        j.budget = ResourceVector(reg.size());
        j.demand[0] = l_gpu;
        j.budget[0] = f_gpu;
        if (has_mem) {
            j.demand[1] = l_mem;
            j.budget[1] = f_mem;
        }
        j.bandwidth_bps = bw;
        j.efficiency = zeta;
        std::vector<double> params;
        for (std::size_t k = 10; k < f.size(); ++k)
            if (!f[k].empty()) params.push_back(parse_num(f[k], line_no, "utility parameter"));
        try {
            j.utility = make_utility(f[9], params);
            j.validate(reg);
        } catch (const std::exception& e) {
            throw std::runtime_error("trace line " + std::to_string(line_no) + ": " + e.what());
        }
        jobs.push_back(std::move(j));
    }
    std::stable_sort(jobs.begin(), jobs.end(),
                     [](const Job& a, const Job& b) { return a.arrival < b.arrival; });
    return jobs;
}

void write_trace(const std::string& path, const std::vector<Job>& jobs,
                 const ResourceRegistry& reg) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace file " + path);
    const bool has_mem = reg.index_of("mem") >= 0;
    out << "id,arrival,N,l_gpu,l_mem,F_gpu,F_mem,bandwidth_bps,zeta,utility_kind,utility_params\n";
    for (const Job& j : jobs) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,", j.id,
                      j.arrival, j.max_workers, j.demand[0], has_mem ? j.demand[1] : 0.0,
                      j.budget[0], has_mem ? j.budget[1] : 0.0, j.bandwidth_bps, j.efficiency);
        out << buf << utility_kind_name(j.utility);
        for (double p : utility_params(j.utility)) {
            std::snprintf(buf, sizeof(buf), ",%.10g", p);
            out << buf;
        }
        out << "\n";
    }
}

}  // namespace rarsched::sim
