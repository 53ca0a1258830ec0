#include "rarsched/rartime.hpp"

namespace rarsched {

double per_iteration_time(const RarParams& p, int workers) {
    if (workers < 1) throw std::domain_error("worker count must be >= 1");
    const double ring = p.gradient_size * (workers - 1) / workers *
                        (2.0 / p.worker_bandwidth + 1.0 / p.reduce_speed);
    return ring + p.fp_time_per_sample * p.batch_size + p.bp_time + p.gamma_comm;
}

double per_iteration_time_bound(const RarParams& p) {
    return p.gradient_size * (2.0 / p.worker_bandwidth + 1.0 / p.reduce_speed) +
           p.fp_time_per_sample * p.batch_size + p.bp_time + p.gamma_comm;
}

double iterations_per_slot(const RarParams& p, int workers, double slot_seconds) {
    if (slot_seconds <= 0.0) throw std::domain_error("slot duration must be positive");
    return slot_seconds / per_iteration_time(p, workers);
}

}  // namespace rarsched
