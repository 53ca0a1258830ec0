#include "rarsched/utility.hpp"

namespace rarsched {

double utility_value(const UtilitySpec& spec, double v) {
    if (v < 0.0) throw std::domain_error("utility argument must be nonnegative");
    return std::visit(
        [v](const auto& u) -> double {
            using T = std::decay_t<decltype(u)>;
            if constexpr (std::is_same_v<T, SqrtUtility>) {
                return u.c * std::sqrt(v);
            } else if constexpr (std::is_same_v<T, LogUtility>) {
                return std::log1p(v);
            } else if constexpr (std::is_same_v<T, NegQuadCostUtility>) {
                return -(u.c2 * v * v + u.c1 * v);
            } else {
                return u.l1 / (1.0 + std::exp(-u.l2 * (v - u.l3)));
            }
        },
        spec);
}

bool utility_is_concave(const UtilitySpec& spec) {
    return !std::holds_alternative<SigmoidUtility>(spec);
}

std::string utility_kind_name(const UtilitySpec& spec) {
    return std::visit(
        [](const auto& u) -> std::string {
            using T = std::decay_t<decltype(u)>;
            if constexpr (std::is_same_v<T, SqrtUtility>) return "sqrt";
            else if constexpr (std::is_same_v<T, LogUtility>) return "log";
            else if constexpr (std::is_same_v<T, NegQuadCostUtility>) return "negquad";
            else return "sigmoid";
        },
        spec);
}

std::vector<double> utility_params(const UtilitySpec& spec) {
    return std::visit(
        [](const auto& u) -> std::vector<double> {
            using T = std::decay_t<decltype(u)>;
            if constexpr (std::is_same_v<T, SqrtUtility>) return {u.c};
            else if constexpr (std::is_same_v<T, LogUtility>) return {};
            else if constexpr (std::is_same_v<T, NegQuadCostUtility>) return {u.c2, u.c1};
            else return {u.l1, u.l2, u.l3};
        },
        spec);
}

UtilitySpec make_utility(const std::string& kind, const std::vector<double>& params) {
    auto need = [&](std::size_t n) {
        if (params.size() != n)
            throw std::invalid_argument("utility '" + kind + "' expects " + std::to_string(n) +
                                        " parameters, got " + std::to_string(params.size()));
    };
    if (kind == "sqrt") {
        need(1);
        if (params[0] <= 0.0) throw std::invalid_argument("sqrt utility requires C > 0");
        return SqrtUtility{params[0]};
    }
    if (kind == "log") {
        need(0);
        return LogUtility{};
    }
    if (kind == "negquad") {
        need(2);
        if (params[0] < 0.0) throw std::invalid_argument("negquad utility requires c2 >= 0");
        return NegQuadCostUtility{params[0], params[1]};
    }
    if (kind == "sigmoid") {
        need(3);
        return SigmoidUtility{params[0], params[1], params[2]};
    }
    throw std::invalid_argument("unknown utility kind '" + kind + "'");
}

}  // namespace rarsched
