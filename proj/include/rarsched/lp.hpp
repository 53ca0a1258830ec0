#pragma once

#include <limits>
#include <string>
#include <vector>

namespace rarsched::lp {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = kInfinity;
};

enum class Relation { LessEq, Equal, GreaterEq };

struct Constraint {
    std::vector<std::pair<int, double>> coeffs;  // (variable index, coefficient)
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
    std::string name;
};

/// A linear program with a maximization objective. Variables are referenced
/// by the dense index returned from add_variable.
class LinearProgram {
public:
    int add_variable(std::string name, double lower = 0.0, double upper = kInfinity);
    void add_constraint(std::vector<std::pair<int, double>> coeffs, Relation rel, double rhs,
                        std::string name = {});
    void set_objective_coeff(int var, double coeff);

    std::size_t variable_count() const { return vars_.size(); }
    std::size_t constraint_count() const { return cons_.size(); }
    const std::vector<Variable>& variables() const { return vars_; }
    const std::vector<Constraint>& constraints() const { return cons_; }
    const std::vector<double>& objective() const { return obj_; }

    /// Checks finite coefficients, known variable references and ordered
    /// bounds. Throws std::invalid_argument on the first problem found.
    void validate() const;

    /// Fixed-format text dump (objective row, constraint rows, bounds) for
    /// debugging against external solvers.
    std::string dump() const;

private:
    std::vector<Variable> vars_;
    std::vector<Constraint> cons_;
    std::vector<double> obj_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };

std::string to_string(SolveStatus s);

struct LpSolution {
    SolveStatus status = SolveStatus::NumericalFailure;
    std::vector<double> values;
    double objective = 0.0;
    long iterations = 0;

    bool optimal() const { return status == SolveStatus::Optimal; }
};

struct SimplexOptions {
    double feas_tol = 1e-7;
    double opt_tol = 1e-9;
    long max_iterations = 0;      // 0 = automatic (scales with problem size)
    int refactor_interval = 100;  // pivots between basis refactorizations
};

/// Bounded-variable revised simplex (two-phase). Deterministic: Dantzig
/// pricing with lowest-index tie-breaks, falling back to Bland's rule under
/// degeneracy. Numerical trouble is reported as an explicit status, never a
/// silent wrong answer.
LpSolution solve(const LinearProgram& lp, const SimplexOptions& opts = {});

}  // namespace rarsched::lp
