#include "rarsched/lp.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rarsched::lp {

int LinearProgram::add_variable(std::string name, double lower, double upper) {
    vars_.push_back({std::move(name), lower, upper});
    obj_.push_back(0.0);
    return static_cast<int>(vars_.size()) - 1;
}

void LinearProgram::add_constraint(std::vector<std::pair<int, double>> coeffs, Relation rel,
                                   double rhs, std::string name) {
    cons_.push_back({std::move(coeffs), rel, rhs, std::move(name)});
}

void LinearProgram::set_objective_coeff(int var, double coeff) {
    obj_.at(var) = coeff;
}

void LinearProgram::validate() const {
    for (const auto& v : vars_) {
        if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper)
            throw std::invalid_argument("variable " + v.name + " has invalid bounds");
    }
    for (const auto& c : cons_) {
        if (!std::isfinite(c.rhs)) throw std::invalid_argument("constraint rhs not finite");
        for (auto [j, a] : c.coeffs) {
            if (j < 0 || j >= static_cast<int>(vars_.size()))
                throw std::invalid_argument("constraint references unknown variable");
            if (!std::isfinite(a)) throw std::invalid_argument("constraint coefficient not finite");
        }
    }
    for (double c : obj_)
        if (!std::isfinite(c)) throw std::invalid_argument("objective coefficient not finite");
}

std::string LinearProgram::dump() const {
    std::ostringstream os;
    os << "maximize\n obj:";
    for (std::size_t j = 0; j < vars_.size(); ++j)
        if (obj_[j] != 0.0) os << " " << (obj_[j] >= 0 ? "+" : "") << obj_[j] << " " << vars_[j].name;
    os << "\nsubject to\n";
    for (std::size_t i = 0; i < cons_.size(); ++i) {
        const auto& c = cons_[i];
        os << " " << (c.name.empty() ? "c" + std::to_string(i) : c.name) << ":";
        for (auto [j, a] : c.coeffs)
            os << " " << (a >= 0 ? "+" : "") << a << " " << vars_[j].name;
        switch (c.rel) {
            case Relation::LessEq: os << " <= "; break;
            case Relation::Equal: os << " = "; break;
            case Relation::GreaterEq: os << " >= "; break;
        }
        os << c.rhs << "\n";
    }
    os << "bounds\n";
    for (const auto& v : vars_) {
        os << " " << (std::isinf(v.lower) ? "-inf" : std::to_string(v.lower)) << " <= " << v.name
           << " <= " << (std::isinf(v.upper) ? "+inf" : std::to_string(v.upper)) << "\n";
    }
    os << "end\n";
    return os.str();
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::IterationLimit: return "iteration-limit";
        case SolveStatus::NumericalFailure: return "numerical-failure";
    }
    return "?";
}

namespace {

enum class VarStatus : char { Basic, AtLower, AtUpper, FreeNonbasic };

struct Eta {
    int row;
    std::vector<std::pair<int, double>> col;  // nonzeros of the FTRAN'd pivot column
};

// Bounded-variable two-phase revised simplex over [A | I] x = b.
class Simplex {
public:
    Simplex(const LinearProgram& lp, const SimplexOptions& opts) : opts_(opts) {
        n_ = static_cast<int>(lp.variable_count());
        m_ = static_cast<int>(lp.constraint_count());
        ncols_ = n_ + m_;

        lower_.resize(ncols_);
        upper_.resize(ncols_);
        cost_.assign(ncols_, 0.0);
        for (int j = 0; j < n_; ++j) {
            lower_[j] = lp.variables()[j].lower;
            upper_[j] = lp.variables()[j].upper;
            cost_[j] = lp.objective()[j];
        }

        // Row scaling by max |coefficient|, rounded to a power of two.
        rhs_.resize(m_);
        std::vector<double> row_scale(m_, 1.0);
        for (int i = 0; i < m_; ++i) {
            double mx = 0.0;
            for (auto [j, a] : lp.constraints()[i].coeffs) mx = std::max(mx, std::abs(a));
            if (mx > 0.0) row_scale[i] = std::exp2(-std::round(std::log2(mx)));
        }

        // Sparse columns of A (scaled), merged duplicates.
        col_entries_.resize(ncols_);
        for (int i = 0; i < m_; ++i) {
            const auto& c = lp.constraints()[i];
            for (auto [j, a] : c.coeffs) {
                if (a == 0.0) continue;
                col_entries_[j].emplace_back(i, a * row_scale[i]);
            }
            rhs_[i] = c.rhs * row_scale[i];
            const int logical = n_ + i;
            col_entries_[logical].emplace_back(i, 1.0);
            switch (c.rel) {
                case Relation::LessEq: lower_[logical] = 0.0; upper_[logical] = kInfinity; break;
                case Relation::GreaterEq: lower_[logical] = -kInfinity; upper_[logical] = 0.0; break;
                case Relation::Equal: lower_[logical] = 0.0; upper_[logical] = 0.0; break;
            }
        }
        for (auto& col : col_entries_) {
            std::sort(col.begin(), col.end());
            std::vector<std::pair<int, double>> merged;
            for (auto [i, a] : col) {
                if (!merged.empty() && merged.back().first == i) merged.back().second += a;
                else merged.emplace_back(i, a);
            }
            col.swap(merged);
        }

        max_iters_ = opts.max_iterations > 0 ? opts.max_iterations
                                             : 2000 + 40L * (static_cast<long>(m_) + n_);
    }

    LpSolution run() {
        LpSolution sol;
        if (m_ == 0) return solve_unconstrained(sol);

        init_basis();
        if (!refactorize()) {
            sol.status = SolveStatus::NumericalFailure;
            return sol;
        }

        SolveStatus st = iterate(/*phase1=*/true);
        if (st == SolveStatus::Optimal) {
            if (infeasibility() > 1e-6) {
                sol.status = SolveStatus::Infeasible;
                sol.iterations = iters_;
                return sol;
            }
            st = iterate(/*phase1=*/false);
        } else if (st == SolveStatus::Unbounded) {
            // Phase 1 is bounded below; an unbounded ray means numerics failed.
            st = SolveStatus::NumericalFailure;
        }

        sol.iterations = iters_;
        sol.status = st;
        if (st != SolveStatus::Optimal) return sol;

        recompute_basics();
        if (infeasibility() > 1e-5) {
            sol.status = SolveStatus::NumericalFailure;
            return sol;
        }
        sol.values.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j) sol.values[j] = clamp_to_bounds(j, x_[j]);
        sol.objective = 0.0;
        for (int j = 0; j < n_; ++j) sol.objective += cost_[j] * sol.values[j];
        return sol;
    }

private:
    LpSolution solve_unconstrained(LpSolution& sol) {
        sol.values.assign(n_, 0.0);
        sol.objective = 0.0;
        for (int j = 0; j < n_; ++j) {
            double v;
            if (cost_[j] > 0) v = upper_[j];
            else if (cost_[j] < 0) v = lower_[j];
            else v = std::isfinite(lower_[j]) ? lower_[j] : (std::isfinite(upper_[j]) ? upper_[j] : 0.0);
            if (!std::isfinite(v) && cost_[j] != 0.0) {
                sol.status = SolveStatus::Unbounded;
                return sol;
            }
            if (!std::isfinite(v)) v = 0.0;
            sol.values[j] = v;
            sol.objective += cost_[j] * v;
        }
        sol.status = SolveStatus::Optimal;
        return sol;
    }

    void init_basis() {
        vstat_.assign(ncols_, VarStatus::AtLower);
        x_.assign(ncols_, 0.0);
        for (int j = 0; j < ncols_; ++j) {
            if (std::isfinite(lower_[j])) {
                vstat_[j] = VarStatus::AtLower;
                x_[j] = lower_[j];
            } else if (std::isfinite(upper_[j])) {
                vstat_[j] = VarStatus::AtUpper;
                x_[j] = upper_[j];
            } else {
                vstat_[j] = VarStatus::FreeNonbasic;
                x_[j] = 0.0;
            }
        }
        basis_.resize(m_);
        basis_pos_.assign(ncols_, -1);
        for (int i = 0; i < m_; ++i) {
            basis_[i] = n_ + i;
            basis_pos_[n_ + i] = i;
            vstat_[n_ + i] = VarStatus::Basic;
        }
    }

    bool refactorize() {
        std::vector<Eigen::Triplet<double>> trips;
        for (int i = 0; i < m_; ++i)
            for (auto [r, a] : col_entries_[basis_[i]]) trips.emplace_back(r, i, a);
        Eigen::SparseMatrix<double> B(m_, m_);
        B.setFromTriplets(trips.begin(), trips.end());
        lu_.compute(B);
        if (lu_.info() != Eigen::Success) return false;
        etas_.clear();
        recompute_basics();
        return true;
    }

    void recompute_basics() {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(m_);
        for (int i = 0; i < m_; ++i) r[i] = rhs_[i];
        for (int j = 0; j < ncols_; ++j) {
            if (vstat_[j] == VarStatus::Basic || x_[j] == 0.0) continue;
            for (auto [i, a] : col_entries_[j]) r[i] -= a * x_[j];
        }
        Eigen::VectorXd xb = lu_.solve(r);
        for (const Eta& e : etas_) apply_eta(e, xb);
        for (int i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
    }

    static void apply_eta(const Eta& e, Eigen::VectorXd& v) {
        const double vr = v[e.row];
        if (vr == 0.0) return;
        double wr = 0.0;
        for (auto [i, w] : e.col)
            if (i == e.row) wr = w;
        const double t = vr / wr;
        for (auto [i, w] : e.col) v[i] -= w * t;
        v[e.row] = t;
    }

    static void apply_eta_transpose(const Eta& e, Eigen::VectorXd& y) {
        double s = y[e.row];
        double wr = 0.0;
        for (auto [i, w] : e.col) {
            if (i == e.row) wr = w;
            else s -= w * y[i];
        }
        y[e.row] = s / wr;
    }

    // w = B^{-1} a_j
    void ftran(int j, Eigen::VectorXd& w) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(m_);
        for (auto [i, v] : col_entries_[j]) a[i] = v;
        w = lu_.solve(a);
        for (const Eta& e : etas_) apply_eta(e, w);
    }

    // y = B^{-T} c_B
    void btran(const Eigen::VectorXd& cb, Eigen::VectorXd& y) {
        y = cb;
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) apply_eta_transpose(*it, y);
        y = lu_.adjoint().solve(y).eval();
    }

    double infeasibility() const {
        double g = 0.0;
        for (int i = 0; i < m_; ++i) {
            const int j = basis_[i];
            if (x_[j] < lower_[j]) g += lower_[j] - x_[j];
            else if (x_[j] > upper_[j]) g += x_[j] - upper_[j];
        }
        return g;
    }

    double clamp_to_bounds(int j, double v) const {
        return std::min(std::max(v, std::isfinite(lower_[j]) ? lower_[j] : v),
                        std::isfinite(upper_[j]) ? upper_[j] : std::max(v, lower_[j]));
    }

    // Effective cost of basic variables for the current phase.
    void basic_costs(bool phase1, Eigen::VectorXd& cb) const {
        cb.resize(m_);
        for (int i = 0; i < m_; ++i) {
            const int j = basis_[i];
            if (phase1) {
                if (x_[j] < lower_[j] - opts_.feas_tol) cb[i] = 1.0;
                else if (x_[j] > upper_[j] + opts_.feas_tol) cb[i] = -1.0;
                else cb[i] = 0.0;
            } else {
                cb[i] = cost_[j];
            }
        }
    }

    SolveStatus iterate(bool phase1) {
        Eigen::VectorXd cb, y, w;
        int degenerate_streak = 0;

        while (true) {
            if (phase1 && infeasibility() <= opts_.feas_tol) return SolveStatus::Optimal;
            if (iters_ >= max_iters_) return SolveStatus::IterationLimit;

            basic_costs(phase1, cb);
            btran(cb, y);

            // Pricing. sigma = +1 to increase the entering variable, -1 to decrease.
            const bool bland = degenerate_streak > 40;
            int q = -1;
            int sigma = 0;
            double best = opts_.opt_tol;
            for (int j = 0; j < ncols_; ++j) {
                if (vstat_[j] == VarStatus::Basic) continue;
                if (upper_[j] - lower_[j] < 1e-14) continue;  // fixed
                double d = phase1 ? 0.0 : cost_[j];
                for (auto [i, a] : col_entries_[j]) d -= a * y[i];
                const bool can_up = vstat_[j] != VarStatus::AtUpper;
                const bool can_down = vstat_[j] != VarStatus::AtLower;
                if (can_up && d > best) {
                    q = j; sigma = +1; if (bland) break;
                    best = d;
                } else if (can_down && -d > best) {
                    q = j; sigma = -1; if (bland) break;
                    best = -d;
                }
            }
            if (q < 0) return SolveStatus::Optimal;  // converged for this phase

            ftran(q, w);

            // Ratio test. Breakpoints from basic variables and from the
            // entering variable's opposite bound.
            const double ptol = 1e-9;
            double t_limit = kInfinity;
            int leave_pos = -1;       // basis position that blocks, -1 = bound flip
            bool leave_at_upper = false;
            double t_flip = upper_[q] - lower_[q];  // inf for free/one-sided

            // First pass: strict minimum ratio.
            for (int i = 0; i < m_; ++i) {
                if (std::abs(w[i]) <= ptol) continue;
                const int bj = basis_[i];
                const double delta = -sigma * w[i];
                const double xv = x_[bj];
                double ratio = kInfinity;
                if (phase1 && xv < lower_[bj] - opts_.feas_tol) {
                    if (delta > 0) ratio = (lower_[bj] - xv) / delta;
                } else if (phase1 && xv > upper_[bj] + opts_.feas_tol) {
                    if (delta < 0) ratio = (upper_[bj] - xv) / delta;
                } else if (delta > 0 && std::isfinite(upper_[bj])) {
                    ratio = (upper_[bj] - xv) / delta;
                } else if (delta < 0 && std::isfinite(lower_[bj])) {
                    ratio = (lower_[bj] - xv) / delta;
                }
                if (ratio < t_limit) t_limit = ratio;
            }
            t_limit = std::max(t_limit, 0.0);

            // Second pass: among blockers within tolerance of the minimum,
            // prefer the largest pivot, then the lowest variable id.
            double t = std::min(t_limit, t_flip);
            if (!std::isfinite(t)) {
                return phase1 ? SolveStatus::NumericalFailure : SolveStatus::Unbounded;
            }
            if (t_limit <= t_flip) {
                double best_pivot = 0.0;
                for (int i = 0; i < m_; ++i) {
                    if (std::abs(w[i]) <= ptol) continue;
                    const int bj = basis_[i];
                    const double delta = -sigma * w[i];
                    const double xv = x_[bj];
                    double ratio = kInfinity;
                    bool at_upper = false;
                    if (phase1 && xv < lower_[bj] - opts_.feas_tol) {
                        if (delta > 0) { ratio = (lower_[bj] - xv) / delta; at_upper = false; }
                    } else if (phase1 && xv > upper_[bj] + opts_.feas_tol) {
                        if (delta < 0) { ratio = (upper_[bj] - xv) / delta; at_upper = true; }
                    } else if (delta > 0 && std::isfinite(upper_[bj])) {
                        ratio = (upper_[bj] - xv) / delta;
                        at_upper = true;
                    } else if (delta < 0 && std::isfinite(lower_[bj])) {
                        ratio = (xv - lower_[bj]) / (-delta);
                        at_upper = false;
                    }
                    if (!std::isfinite(ratio) || ratio > t_limit + 1e-10) continue;
                    const double piv = std::abs(w[i]);
                    if (leave_pos < 0 || piv > best_pivot + 1e-12 ||
                        (std::abs(piv - best_pivot) <= 1e-12 && bj < basis_[leave_pos])) {
                        leave_pos = i;
                        best_pivot = piv;
                        leave_at_upper = at_upper;
                    }
                }
                if (leave_pos >= 0) {
                    const int bj = basis_[leave_pos];
                    const double delta = -sigma * w[leave_pos];
                    const double target = leave_at_upper ? upper_[bj] : lower_[bj];
                    t = std::max((target - x_[bj]) / delta, 0.0);
                } else {
                    t = t_flip;  // all blockers were below pivot tolerance
                }
            }

            if (t <= 1e-10) ++degenerate_streak;
            else degenerate_streak = 0;

            // Apply the step.
            for (int i = 0; i < m_; ++i) {
                if (w[i] != 0.0) x_[basis_[i]] -= sigma * t * w[i];
            }
            x_[q] += sigma * t;
            ++iters_;

            if (leave_pos < 0 || (t_flip < kInfinity && t_flip < t_limit - 1e-12)) {
                // Bound-to-bound flip of the entering variable.
                vstat_[q] = sigma > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
                x_[q] = sigma > 0 ? upper_[q] : lower_[q];
            } else {
                const int bj = basis_[leave_pos];
                vstat_[bj] = leave_at_upper ? VarStatus::AtUpper : VarStatus::AtLower;
                x_[bj] = leave_at_upper ? upper_[bj] : lower_[bj];
                basis_pos_[bj] = -1;
                basis_[leave_pos] = q;
                basis_pos_[q] = leave_pos;
                vstat_[q] = VarStatus::Basic;

                Eta e;
                e.row = leave_pos;
                for (int i = 0; i < m_; ++i)
                    if (std::abs(w[i]) > 1e-12 || i == leave_pos) e.col.emplace_back(i, w[i]);
                etas_.push_back(std::move(e));

                if (static_cast<int>(etas_.size()) >= opts_.refactor_interval) {
                    if (!refactorize()) return SolveStatus::NumericalFailure;
                }
            }
        }
    }

    SimplexOptions opts_;
    int n_ = 0, m_ = 0, ncols_ = 0;
    long iters_ = 0;
    long max_iters_ = 0;

    std::vector<std::vector<std::pair<int, double>>> col_entries_;
    std::vector<double> lower_, upper_, cost_, rhs_, x_;
    std::vector<VarStatus> vstat_;
    std::vector<int> basis_, basis_pos_;

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    std::vector<Eta> etas_;
};

}  // namespace

LpSolution solve(const LinearProgram& lp, const SimplexOptions& opts) {
    lp.validate();
    Simplex s(lp, opts);
    return s.run();
}

}  // namespace rarsched::lp
