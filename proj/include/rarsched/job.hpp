#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "rarsched/rartime.hpp"
#include "rarsched/resources.hpp"
#include "rarsched/utility.hpp"

namespace rarsched {

using JobId = int;

/// A ring-all-reduce training job as seen by the scheduler.
struct Job {
    JobId id = -1;
    int arrival = 1;              // a_i, 1-based slot index
    int max_workers = 1;          // N_i, concurrent worker cap per slot
    ResourceVector demand;        // l_i^r, per-worker demand
    ResourceVector budget;        // F_i^r, total worker-time x demand cap
    double bandwidth_bps = 0.0;   // b_i, reserved bandwidth per ring hop
    double efficiency = 1.0;      // zeta_i, progress per worker-slot
    UtilitySpec utility = LogUtility{};
    std::optional<RarParams> rar; // when present, efficiency may be derived from it

    /// Remaining worker-time budget min_r F^r/l^r. Positive demands only.
    double worker_time_budget() const {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < demand.size(); ++r)
            if (demand[r] > 0.0) m = std::min(m, budget[r] / demand[r]);
        return m;
    }

    double utility_at(double accumulated_worker_time) const {
        return utility_value(utility, efficiency * accumulated_worker_time);
    }

    void validate(const ResourceRegistry& reg) const {
        if (arrival < 1) throw std::invalid_argument(err("arrival must be >= 1"));
        if (max_workers < 1) throw std::invalid_argument(err("max workers must be >= 1"));
        if (demand.size() != reg.size() || budget.size() != reg.size())
            throw std::invalid_argument(err("resource vectors do not match registry"));
        if (!demand.all_nonnegative() || !demand.any_positive())
            throw std::invalid_argument(err("per-worker demand must be nonnegative with at least one positive entry"));
        for (std::size_t r = 0; r < demand.size(); ++r)
            if (demand[r] > 0.0 && budget[r] < demand[r])
                throw std::invalid_argument(err("budget below one worker's demand for " + reg.name(r)));
        if (bandwidth_bps <= 0.0) throw std::invalid_argument(err("bandwidth reservation must be positive"));
        if (efficiency <= 0.0) throw std::invalid_argument(err("efficiency must be positive"));
        if (rar) rar->validate();
    }

private:
    std::string err(const std::string& msg) const { return "job " + std::to_string(id) + ": " + msg; }
};

}  // namespace rarsched
