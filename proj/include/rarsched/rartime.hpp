#pragma once

#include <stdexcept>

namespace rarsched {

/// Parameters of the ring-all-reduce per-iteration time model.
/// Data sizes are in gradient elements and rates in elements per second;
/// callers normalize units at ingestion. `gamma_comm` is the fixed
/// communication-overhead latency (distinct from the rounding edge-violation
/// factor, which is named gamma_edge elsewhere).
struct RarParams {
    double gradient_size = 1.0;      // d: gradient vector size (elements)
    double worker_bandwidth = 1.0;   // b: inter-worker bandwidth (elements/sec)
    double reduce_speed = 1.0;       // G: per-worker reduction speed (elements/sec)
    double fp_time_per_sample = 0.0; // t_f: forward-pass time per sample (sec)
    int batch_size = 1;              // M: mini-batch size
    double bp_time = 0.0;            // t_b: backward-pass time (sec)
    double gamma_comm = 0.0;         // overhead latency (sec)

    void validate() const {
        if (gradient_size <= 0 || worker_bandwidth <= 0 || reduce_speed <= 0 ||
            fp_time_per_sample <= 0 || bp_time <= 0 || batch_size < 1)
            throw std::invalid_argument("RAR parameters must be strictly positive");
        if (gamma_comm < 0) throw std::invalid_argument("communication overhead must be >= 0");
    }
};

/// Per-iteration training time of a w-worker ring:
///   tau = d(w-1)/w * (2/b + 1/G) + t_f*M + t_b + gamma_comm.
double per_iteration_time(const RarParams& p, int workers);

/// Limit of per_iteration_time as the worker count grows without bound.
double per_iteration_time_bound(const RarParams& p);

/// Training iterations completed per worker-slot: slot_seconds / tau.
double iterations_per_slot(const RarParams& p, int workers, double slot_seconds);

}  // namespace rarsched
