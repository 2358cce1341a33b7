// Fairness and efficiency metrics over simulated completion times.
#pragma once

#include <string>
#include <vector>

#include "coflow/types.hpp"

namespace coflow {

// phi * (C - r) / (C0 - r). Degenerate coflows (C0 <= r) are rejected.
double experimental_slowdown(double cct, double isolation, double release, double phi);

struct StretchIndex {
    std::vector<double> per_coflow;   // max(0, E_j/E - 1)
    double total = 0.0;
};

// Relative magnitude of slowdown-target violations against level E.
StretchIndex stretch_index(const std::vector<double>& slowdowns, double E);

// (sum R)^2 / (K sum R^2), in (0, 1]; 1 iff all rates equal.
double jain_index(const std::vector<double>& rates);

double weighted_cct(const std::vector<double>& ccts, const std::vector<double>& weights);

struct CoflowOutcome {
    CoflowId id = 0;
    double cct = 0.0;          // simulated completion
    double isolation = 0.0;    // C_j^0
    double release = 0.0;
    double slowdown = 0.0;     // experimental, phi-weighted
    double progress = 0.0;     // V_j / (cct - release)
    double stretch = 0.0;      // max(0, slowdown/E - 1)
    bool violation = false;    // slowdown > E + eps
};

struct OutcomeReport {
    std::vector<CoflowOutcome> coflows;
    double slowdown_target = 0.0;   // the E the report was judged against
    double weighted_cct = 0.0;
    double stretch_total = 0.0;
    double jain = 0.0;
    double violation_fraction = 0.0;

    std::string to_csv() const;            // one row per coflow
    std::string summary_json() const;      // batch-level summary
};

// Assembles the per-coflow and batch metrics from simulated CCTs (indexed
// like batch.coflows). `target_e` is the slowdown level violations are
// counted against.
OutcomeReport make_report(const Batch& batch, const std::vector<double>& ccts, double target_e);

}  // namespace coflow
