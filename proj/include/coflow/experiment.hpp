// The end-to-end experimental pipeline: generate batches, schedule them with
// the slowdown-constrained and unconstrained primal-dual schedulers, simulate
// greedy rate allocation, and aggregate fairness/efficiency metrics.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coflow/metrics.hpp"
#include "coflow/types.hpp"
#include "coflow/workload.hpp"

namespace coflow {

struct SchedulerSpec {
    enum class Kind { Cofair, Sincronia };
    Kind kind = Kind::Cofair;
    double e_multiplier = 1.0;   // E = multiplier * E^p; >= 1

    std::string name() const;
};

struct ExperimentSpec {
    GenConfig generator;
    int repetitions = 1;
    std::vector<SchedulerSpec> schedulers;
    std::uint64_t seed = 0;   // master seed; instance i uses a derived seed

    static ExperimentSpec from_json(const std::string& text);
    void validate() const;
};

struct InstanceResult {
    int instance = 0;
    std::string scheduler;
    bool scheduled = false;        // false: scheduler reported infeasible/failed
    std::string failure;
    double min_slowdown = 0.0;     // E^p of the instance
    double target_e = 0.0;         // the E handed to the scheduler (0 = none)
    std::vector<CoflowId> sigma;
    OutcomeReport report;          // violations judged against E^p
    bool reverified = false;       // primal feasibility re-check of sigma
};

struct ExperimentResult {
    std::vector<InstanceResult> rows;     // instance-major, scheduler order as in spec
    bool invariants_ok = true;

    std::string rows_csv() const;         // per-coflow rows
    std::string summary_json() const;     // aggregated metrics + CCDF samples
};

ExperimentResult run_experiment(const ExperimentSpec& spec, int jobs = 0);

// Empirical complementary CDF: sorted distinct values v with the fraction of
// samples >= v. Single step for all-equal samples; the tail at a unique
// maximum is 1/n.
std::vector<std::pair<double, double>> ccdf(const std::vector<double>& samples);

}  // namespace coflow
