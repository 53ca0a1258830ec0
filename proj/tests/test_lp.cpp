#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "lp_suite.hpp"

using namespace rarsched::lp;

TEST_CASE("spec examples") {
    SUBCASE("max x subject to x <= 3") {
        LinearProgram lp;
        int x = lp.add_variable("x");
        lp.set_objective_coeff(x, 1.0);
        lp.add_constraint({{x, 1.0}}, Relation::LessEq, 3.0);
        auto s = solve(lp);
        REQUIRE(s.optimal());
        CHECK(s.objective == doctest::Approx(3.0));
        CHECK(s.values[0] == doctest::Approx(3.0));
    }
    SUBCASE("shared budget has objective 1 at any optimal vertex") {
        LinearProgram lp;
        int x = lp.add_variable("x"), y = lp.add_variable("y");
        lp.set_objective_coeff(x, 1.0);
        lp.set_objective_coeff(y, 1.0);
        lp.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::LessEq, 1.0);
        auto s = solve(lp);
        REQUIRE(s.optimal());
        CHECK(s.objective == doctest::Approx(1.0));
    }
    SUBCASE("infeasible box") {
        LinearProgram lp;
        int x = lp.add_variable("x");
        lp.set_objective_coeff(x, 1.0);
        lp.add_constraint({{x, 1.0}}, Relation::LessEq, -1.0);
        CHECK(solve(lp).status == SolveStatus::Infeasible);
    }
}

TEST_CASE("hand-constructed suite") {
    for (auto& c : lp_suite::cases()) {
        CAPTURE(c.name);
        auto s = solve(c.lp);
        CHECK(s.status == c.expected_status);
        if (c.expected_status == SolveStatus::Optimal && s.optimal()) {
            CHECK(std::abs(s.objective - c.expected_objective) <=
                  1e-6 * std::max(1.0, std::abs(c.expected_objective)));
            // Primal feasibility of the reported point.
            for (const auto& con : c.lp.constraints()) {
                double lhs = 0.0;
                for (auto [j, a] : con.coeffs) lhs += a * s.values[j];
                switch (con.rel) {
                    case Relation::LessEq: CHECK(lhs <= con.rhs + 1e-6); break;
                    case Relation::GreaterEq: CHECK(lhs >= con.rhs - 1e-6); break;
                    case Relation::Equal: CHECK(lhs == doctest::Approx(con.rhs).epsilon(1e-6)); break;
                }
            }
            for (std::size_t j = 0; j < c.lp.variable_count(); ++j) {
                const auto& v = c.lp.variables()[j];
                CHECK(s.values[j] >= v.lower - 1e-6);
                CHECK(s.values[j] <= v.upper + 1e-6);
            }
        }
    }
}

TEST_CASE("determinism: repeated solves agree to 1e-9") {
    for (auto& c : lp_suite::cases()) {
        auto a = solve(c.lp);
        auto b = solve(c.lp);
        CHECK(a.status == b.status);
        if (a.optimal()) CHECK(std::abs(a.objective - b.objective) <= 1e-9);
    }
}

TEST_CASE("weak duality spot check against random feasible points") {
    // Box-bounded random LPs: sampling the box and keeping points feasible for
    // the rows yields feasible points whose objective may never beat the
    // reported optimum.
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coeff(-3.0, 3.0), width(0.5, 4.0), pt(0.0, 1.0);
    std::uniform_int_distribution<int> nd(2, 6), md(1, 5);
    int lps_checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = nd(rng), m = md(rng);
        LinearProgram lp;
        std::vector<double> lo(n), hi(n);
        for (int j = 0; j < n; ++j) {
            lo[j] = 0.0;
            hi[j] = width(rng);
            lp.add_variable("x" + std::to_string(j), lo[j], hi[j]);
            lp.set_objective_coeff(j, coeff(rng));
        }
        std::vector<std::vector<double>> rows(m, std::vector<double>(n));
        std::vector<double> rhs(m);
        for (int i = 0; i < m; ++i) {
            std::vector<std::pair<int, double>> entries;
            for (int j = 0; j < n; ++j) {
                rows[i][j] = coeff(rng);
                entries.emplace_back(j, rows[i][j]);
            }
            // Right-hand side loose enough that the box's center is feasible.
            double center = 0.0;
            for (int j = 0; j < n; ++j) center += rows[i][j] * hi[j] / 2.0;
            rhs[i] = center + width(rng);
            lp.add_constraint(entries, Relation::LessEq, rhs[i]);
        }
        auto s = solve(lp);
        REQUIRE(s.optimal());
        ++lps_checked;
        for (int k = 0; k < 50; ++k) {
            std::vector<double> x(n);
            for (int j = 0; j < n; ++j) x[j] = lo[j] + pt(rng) * (hi[j] - lo[j]);
            bool feasible = true;
            for (int i = 0; i < m && feasible; ++i) {
                double lhs = 0.0;
                for (int j = 0; j < n; ++j) lhs += rows[i][j] * x[j];
                feasible = lhs <= rhs[i];
            }
            if (!feasible) continue;
            double obj = 0.0;
            for (int j = 0; j < n; ++j) obj += lp.objective()[j] * x[j];
            CHECK(obj <= s.objective + 1e-6 * std::max(1.0, std::abs(s.objective)));
        }
    }
    CHECK(lps_checked == 200);
}

TEST_CASE("validation rejects malformed programs") {
    LinearProgram lp;
    int x = lp.add_variable("x", 2.0, 1.0);  // inverted bounds
    lp.set_objective_coeff(x, 1.0);
    CHECK_THROWS_AS(solve(lp), std::invalid_argument);

    LinearProgram lp2;
    lp2.add_variable("x");
    lp2.add_constraint({{5, 1.0}}, Relation::LessEq, 1.0);  // unknown variable
    CHECK_THROWS_AS(solve(lp2), std::invalid_argument);
}

TEST_CASE("text dump carries objective, rows and bounds") {
    LinearProgram lp;
    int x = lp.add_variable("x", 0, 2);
    lp.set_objective_coeff(x, 1.5);
    lp.add_constraint({{x, 1.0}}, Relation::LessEq, 3.0, "cap");
    const std::string dump = lp.dump();
    CHECK(dump.find("maximize") != std::string::npos);
    CHECK(dump.find("cap:") != std::string::npos);
    CHECK(dump.find("bounds") != std::string::npos);
    CHECK(dump.find("x") != std::string::npos);
}
