#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rarsched {

// Utility function family. All variants are evaluated on the accumulated
// efficiency v = zeta * worker-time >= 0.

/// mu(v) = C * sqrt(v), C > 0. SGD-style convergence-rate utility.
struct SqrtUtility {
    double c = 1.0;
};

/// mu(v) = log(1 + v). The +1 shift keeps mu(0) = 0 finite; jobs with zero
/// progress contribute zero utility.
struct LogUtility {};

/// mu(v) = -(c2 * v^2 + c1 * v), c2 >= 0. Energy-cost style utility;
/// nondecreasing on v >= 0 only when c1 <= 0 and the quadratic term has not
/// taken over (always, if c2 == 0).
struct NegQuadCostUtility {
    double c2 = 0.0;
    double c1 = 0.0;
};

/// mu(v) = l1 / (1 + exp(-l2 * (v - l3))). Not globally concave.
struct SigmoidUtility {
    double l1 = 1.0;   // priority / amplitude
    double l2 = 0.5;   // sensitivity
    double l3 = 0.0;   // expected-progress midpoint
};

using UtilitySpec = std::variant<SqrtUtility, LogUtility, NegQuadCostUtility, SigmoidUtility>;

double utility_value(const UtilitySpec& spec, double v);

/// True for the variants that are concave on v >= 0 (sigmoid is excluded).
bool utility_is_concave(const UtilitySpec& spec);

std::string utility_kind_name(const UtilitySpec& spec);
std::vector<double> utility_params(const UtilitySpec& spec);

/// Parses (kind, params) as used in trace files. Throws std::invalid_argument
/// on unknown kinds or wrong parameter counts.
UtilitySpec make_utility(const std::string& kind, const std::vector<double>& params);

}  // namespace rarsched
