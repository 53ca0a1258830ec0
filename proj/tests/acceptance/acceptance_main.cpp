// Acceptance suite: one check per release criterion, each printing a
// [PASS]/[FAIL] line (or [WARN] for the soft policy-comparison check, which
// wants analysis rather than rejection). Exits nonzero if any hard criterion
// fails.

#include <chrono>
#include <cstdio>
#include <random>

#include "rarsched/experiment.hpp"

#include "../lp_suite.hpp"

using namespace rarsched;

namespace {

int failures = 0;

void report(int number, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s: %s\n", ok ? "PASS" : "FAIL", number, what.c_str(),
                detail.c_str());
    if (!ok) ++failures;
}

void report_soft(int number, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s: %s\n", ok ? "PASS" : "WARN", number, what.c_str(),
                detail.c_str());
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

// Shared default scenario: S=10, T=50, 40 sigmoid jobs, ten seeds.
struct DefaultRuns {
    std::vector<sim::RunLog> gadget;          // epsilon = 0.5
    std::vector<sim::RunLog> gadget_strict;   // epsilon = 0, u_b = 100
    std::map<std::string, std::vector<sim::RunLog>> baselines;

    static DefaultRuns make() {
        DefaultRuns runs;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            sim::ClusterSpec cs;
            cs.seed = seed;
            sim::TraceSpec ts;
            ts.seed = seed + 1000003;
            const SubstrateNetwork net = sim::generate_cluster(cs);
            const auto jobs = sim::generate_trace(ts, net.registry());

            gvne::GvneConfig relaxed;
            runs.gadget.push_back(sim::single_run(net, jobs, "gadget", ts.horizon, seed, relaxed, 4));

            gvne::GvneConfig strict;
            strict.epsilon = 0.0;
            strict.rounding_rounds = 100;
            runs.gadget_strict.push_back(
                sim::single_run(net, jobs, "gadget", ts.horizon, seed, strict, 4));

            for (const std::string name : {"fifo", "drf", "las"})
                runs.baselines[name].push_back(
                    sim::single_run(net, jobs, name, ts.horizon, seed, relaxed, 4));
        }
        return runs;
    }
};

// ---------------------------------------------------------------------------

void criterion_1_approximation_ratio() {
    const auto start = std::chrono::steady_clock::now();
    sim::ExperimentConfig cfg;
    cfg.seeds.clear();
    for (std::uint64_t s = 1; s <= 20; ++s) cfg.seeds.push_back(s);
    cfg.threads = 2;
    const auto rows = sim::run_approx_scenario(cfg);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    double mean = 0.0;
    bool every_accepted_above_third = true;
    for (const auto& r : rows) {
        mean += r.ratio;
        if (r.accepted && r.oracle_utility > 1e-12 &&
            r.gadget_utility < r.oracle_utility / 3.0 - 1e-9)
            every_accepted_above_third = false;
    }
    mean /= rows.size();
    const bool ok = every_accepted_above_third && mean >= 0.5 && elapsed <= 120.0;
    report(1, ok, "approximation ratio vs exact oracle",
           fmt("20 instances, mean ratio %.3f, ", mean) +
               std::string("every accepted >= 1/3: ") +
               (every_accepted_above_third ? "yes" : "NO") + fmt(", %.1f s", elapsed));
}

void criterion_2_submodularity() {
    std::mt19937_64 rng(20240818);
    std::uniform_real_distribution<double> cd(0.5, 4.0);
    std::vector<Job> jobs;
    for (int i = 0; i < 5; ++i) {
        Job j;
        j.id = i;
        j.arrival = 1;
        j.max_workers = 5;
        j.demand = ResourceVector{1.0};
        j.budget = ResourceVector{1e6};
        j.bandwidth_bps = 1e9;
        j.efficiency = 1.0;
        switch (i % 3) {
            case 0: j.utility = SqrtUtility{cd(rng)}; break;
            case 1: j.utility = LogUtility{}; break;
            default: j.utility = NegQuadCostUtility{0.0, -cd(rng)}; break;
        }
        jobs.push_back(std::move(j));
    }
    std::uniform_int_distribution<int> size_d(0, 10), slot_d(1, 12), wd(0, 4);
    auto element = [&](int t) {
        policy::SlotElement el;
        el.t = t;
        for (const Job& j : jobs) {
            const int w = wd(rng);
            if (w > 0) el.workers[j.id] = w;
        }
        return el;
    };

    int holds = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<policy::SlotElement> b;
        const int nb = size_d(rng);
        for (int k = 0; k < nb; ++k) b.push_back(element(slot_d(rng)));
        std::vector<policy::SlotElement> a;
        for (const auto& el : b)
            if (rng() % 2 == 0) a.push_back(el);
        const policy::SlotElement v = element(slot_d(rng));
        auto with = [&](std::vector<policy::SlotElement> base) {
            base.push_back(v);
            return base;
        };
        const double ga = policy::set_objective(with(a), jobs) - policy::set_objective(a, jobs);
        const double gb = policy::set_objective(with(b), jobs) - policy::set_objective(b, jobs);
        if (ga >= gb) ++holds;  // exact comparison, no tolerance
    }
    report(2, holds == 1000, "diminishing returns of the temporal objective",
           fmt("%g / 1000 triples hold exactly", holds));
}

void criterion_3_ring_validity(const DefaultRuns& runs) {
    long total = 0, valid = 0;
    auto count = [&](const std::vector<sim::RunLog>& logs) {
        for (const auto& log : logs) {
            for (const auto& slot : log.result.schedule.slots()) {
                for (const auto& [jid, emb] : slot.embeddings) {
                    ++total;
                    if (validate_ring(emb, log.net)) ++valid;
                }
            }
        }
    };
    count(runs.gadget);
    count(runs.gadget_strict);
    for (const auto& [name, logs] : runs.baselines) count(logs);
    report(3, total > 0 && valid == total, "ring validity of every emitted embedding",
           fmt("%g / %g embeddings form a single cycle", valid, total));
}

void criterion_4_capacity_audit(const DefaultRuns& runs) {
    // (a) relaxed capacities hold for every final allocation at eps = 0.5;
    // (b) with eps = 0 and u_b = 100, at least 95% of slots end strictly
    //     capacity-feasible.
    long relaxed_bad = 0;
    for (const auto& log : runs.gadget) {
        std::map<JobId, double> z;
        for (const auto& slot : log.result.schedule.slots()) {
            const auto& diag = log.result.diagnostics[slot.t - 1];
            auto violations = validate_slot(slot, log.jobs, log.net, z, diag.factors.multipliers());
            relaxed_bad += static_cast<long>(violations.size());
            for (const auto& [jid, emb] : slot.embeddings) z[jid] += emb.kappa;
        }
    }

    long strict_slots = 0, strict_ok = 0;
    for (const auto& log : runs.gadget_strict) {
        std::map<JobId, double> z;
        for (const auto& slot : log.result.schedule.slots()) {
            ++strict_slots;
            if (validate_slot(slot, log.jobs, log.net, z).empty()) ++strict_ok;
            for (const auto& [jid, emb] : slot.embeddings) z[jid] += emb.kappa;
        }
    }
    const double strict_fraction = static_cast<double>(strict_ok) / strict_slots;
    report(4, relaxed_bad == 0 && strict_fraction >= 0.95,
           "capacity audit under beta/gamma and strict retry mode",
           fmt("relaxed violations: %g; strict-feasible slots: %.1f%%", (double)relaxed_bad,
               100.0 * strict_fraction));
}

void criterion_5_budget_exactness(const DefaultRuns& runs) {
    long jobs_checked = 0, violations = 0;
    auto audit = [&](const std::vector<sim::RunLog>& logs) {
        for (const auto& log : logs) {
            std::map<JobId, double> z;
            for (const auto& slot : log.result.schedule.slots())
                for (const auto& [jid, emb] : slot.embeddings) z[jid] += emb.kappa;
            for (const Job& j : log.jobs) {
                ++jobs_checked;
                for (std::size_t r = 0; r < j.demand.size(); ++r)
                    if (j.demand[r] * z[j.id] > j.budget[r] + 1e-9) ++violations;
            }
        }
    };
    audit(runs.gadget);
    audit(runs.gadget_strict);
    for (const auto& [name, logs] : runs.baselines) audit(logs);
    report(5, violations == 0, "worker-time budgets are exact across every run",
           fmt("%g jobs audited, %g budget violations", (double)jobs_checked, (double)violations));
}

void criterion_6_policy_comparison(const DefaultRuns& runs) {
    int wins = 0;
    std::string detail;
    for (std::size_t k = 0; k < runs.gadget.size(); ++k) {
        const double g = runs.gadget[k].result.objective;
        double best_baseline = 0.0;
        std::string best_name;
        for (const auto& [name, logs] : runs.baselines) {
            if (logs[k].result.objective > best_baseline) {
                best_baseline = logs[k].result.objective;
                best_name = name;
            }
        }
        if (g >= best_baseline - 1e-9) ++wins;
        else
            detail += fmt("; seed %g: gadget %.1f < %.1f", (double)(k + 1), g, best_baseline) +
                      " (" + best_name + ")";
    }
    const bool ok = wins >= 8;
    report_soft(6, ok, "total utility vs the best baseline on the default scenario",
                fmt("gadget >= best baseline in %g / 10 seeds", (double)wins) + detail);
    if (!ok) {
        std::printf("        analysis: the default sigmoid mix saturates quickly; seeds where a\n"
                    "        baseline led are listed above. See README for the scenario knobs.\n");
    }
}

void criterion_7_capacity_sweeps() {
    sim::ExperimentConfig cfg;
    cfg.seeds = {1, 2, 3};
    cfg.threads = 2;
    cfg.save_logs = false;

    auto mean_by_multiplier = [](const std::vector<sim::RatioRow>& rows) {
        std::map<double, std::pair<double, int>> acc;
        for (const auto& r : rows) {
            acc[r.multiplier].first += r.embedded_ratio;
            acc[r.multiplier].second += 1;
        }
        std::vector<double> multipliers, means;
        for (const auto& [m, sums] : acc) {
            multipliers.push_back(m);
            means.push_back(sums.first / sums.second);
        }
        return std::make_pair(multipliers, means);
    };

    const auto node_rows = sim::run_capacity_sweep(cfg, "node");
    const auto [node_x, node_means] = mean_by_multiplier(node_rows);
    const double node_rho = sim::spearman(node_x, node_means);

    const auto edge_rows = sim::run_capacity_sweep(cfg, "edge");
    const auto [edge_x, edge_means] = mean_by_multiplier(edge_rows);
    const double edge_rho = sim::spearman(edge_x, edge_means);

    report(7, node_rho >= 0.8 && edge_rho >= 0.8,
           "embedded ratio rises with node and edge capacity",
           fmt("Spearman: node %.2f, edge %.2f (means ", node_rho, edge_rho) +
               fmt("node %.2f..%.2f, ", node_means.front(), node_means.back()) +
               fmt("edge %.2f..%.2f)", edge_means.front(), edge_means.back()));
}

void criterion_8_iteration_time() {
    bool ok = true;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> dist_d(1.0, 1e6), dist_rate(1.0, 1e5);
    std::uniform_real_distribution<double> dist_t(1e-5, 0.1);
    std::uniform_int_distribution<int> dist_m(1, 512);
    int grid = 0;
    for (int trial = 0; trial < 200 && ok; ++trial) {
        RarParams p;
        p.gradient_size = dist_d(rng);
        p.worker_bandwidth = dist_rate(rng);
        p.reduce_speed = dist_rate(rng);
        p.fp_time_per_sample = dist_t(rng);
        p.batch_size = dist_m(rng);
        p.bp_time = dist_t(rng);
        p.gamma_comm = dist_t(rng);
        const double bound = p.gradient_size * (2.0 / p.worker_bandwidth + 1.0 / p.reduce_speed) +
                             p.fp_time_per_sample * p.batch_size + p.bp_time + p.gamma_comm;
        double prev = 0.0;
        for (int w = 1; w <= 4096; w = w <= 32 ? w + 1 : w * 2) {
            const double tau = per_iteration_time(p, w);
            const double closed = p.gradient_size * (w - 1.0) / w *
                                      (2.0 / p.worker_bandwidth + 1.0 / p.reduce_speed) +
                                  p.fp_time_per_sample * p.batch_size + p.bp_time + p.gamma_comm;
            if (std::abs(tau - closed) > 1e-9 * std::max(1.0, closed)) ok = false;
            if (tau + 1e-12 < prev) ok = false;
            if (tau > bound + 1e-9 * bound) ok = false;
            prev = tau;
            ++grid;
        }
    }
    report(8, ok, "per-iteration time: closed form, monotone, bounded",
           fmt("%g grid points across 200 parameter draws", (double)grid));
}

void criterion_9_lp_contract() {
    int passed = 0, total = 0;
    for (const auto& c : lp_suite::cases()) {
        ++total;
        auto s = lp::solve(c.lp);
        if (s.status != c.expected_status) continue;
        if (c.expected_status == lp::SolveStatus::Optimal &&
            std::abs(s.objective - c.expected_objective) >
                1e-6 * std::max(1.0, std::abs(c.expected_objective)))
            continue;
        ++passed;
    }
    report(9, passed == total, "simplex contract on the hand-constructed suite",
           fmt("%g / %g programs solved to 1e-6 with correct statuses", (double)passed,
               (double)total));
}

void criterion_10_decomposition_conservation() {
    gvne::GvneConfig cfg;
    cfg.anchor_copy_cap = 0;
    long jobs_checked = 0;
    bool conserved = true, all_valid = true;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        auto small = sim::make_small_instance(seed);
        gvne::GvneInstance inst{1, {}, &small.net};
        for (auto& j : small.jobs) inst.jobs.push_back({&j, 0.0});
        auto model = gvne::build_ilp(inst);
        if (model.blocks.empty()) continue;
        auto sol = lp::solve(model.lp);
        if (!sol.optimal()) {
            conserved = false;
            break;
        }
        auto sel = gvne::select_ring_sizes(sol, model);
        if (sel.kappa.empty()) continue;
        auto aug = gvne::build_augmented_lp(inst, sel, cfg);
        auto aug_sol = lp::solve(aug.lp);
        if (!aug_sol.optimal()) {
            conserved = false;
            break;
        }
        for (const auto& s : gvne::decompose(aug_sol, aug, cfg.feas_tol)) {
            ++jobs_checked;
            double mass = 0.0;
            for (const auto& t : s.tuples) {
                mass += t.phi;
                if (!validate_ring(t.embedding, small.net)) all_valid = false;
                try {
                    t.embedding.validate_structure(small.net);
                } catch (const std::exception&) {
                    all_valid = false;
                }
            }
            if (mass > s.rho_bar + 1e-6) conserved = false;
        }
    }
    report(10, conserved && all_valid && jobs_checked > 0,
           "decomposition conserves mass into ring-valid integral mappings",
           fmt("%g job decompositions over 50 seeded programs", (double)jobs_checked));
}

}  // namespace

int main() {
    std::printf("acceptance suite (default scenario: 10 servers, 50 slots, 40 sigmoid jobs)\n");
    criterion_1_approximation_ratio();
    criterion_2_submodularity();

    const DefaultRuns runs = DefaultRuns::make();
    criterion_3_ring_validity(runs);
    criterion_4_capacity_audit(runs);
    criterion_5_budget_exactness(runs);
    criterion_6_policy_comparison(runs);
    criterion_7_capacity_sweeps();
    criterion_8_iteration_time();
    criterion_9_lp_contract();
    criterion_10_decomposition_conservation();

    if (failures == 0) std::printf("all hard criteria passed\n");
    else std::printf("%d hard criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
