#include "coflow/metrics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "coflow/kernels.hpp"
#include "coflow/loads.hpp"

namespace coflow {

double experimental_slowdown(double cct, double isolation, double release, double phi) {
    const double denom = isolation - release;
    if (!(denom > 0.0))
        throw model_error("experimental_slowdown: degenerate coflow (C0 <= release)");
    return phi * (cct - release) / denom;
}

StretchIndex stretch_index(const std::vector<double>& slowdowns, double E) {
    if (!(E > 0.0)) throw std::invalid_argument("stretch_index: E must be > 0");
    StretchIndex si;
    si.per_coflow.reserve(slowdowns.size());
    for (double e : slowdowns) {
        const double v = std::max(0.0, e / E - 1.0);
        si.per_coflow.push_back(v);
        si.total += v;
    }
    return si;
}

double jain_index(const std::vector<double>& rates) {
    if (rates.empty()) throw std::invalid_argument("jain_index: empty sequence");
    for (double r : rates)
        if (!(r > 0.0)) throw std::invalid_argument("jain_index: rates must be > 0");
    const double s = kernels::sum(rates.data(), rates.size());
    const double s2 = kernels::sum_sq(rates.data(), rates.size());
    return s * s / (static_cast<double>(rates.size()) * s2);
}

double weighted_cct(const std::vector<double>& ccts, const std::vector<double>& weights) {
    if (ccts.size() != weights.size())
        throw std::invalid_argument("weighted_cct: length mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < ccts.size(); ++i) acc += weights[i] * ccts[i];
    return acc;
}

OutcomeReport make_report(const Batch& batch, const std::vector<double>& ccts, double target_e) {
    if (ccts.size() != batch.size())
        throw std::invalid_argument("make_report: cct count does not match batch");
    OutcomeReport rep;
    rep.slowdown_target = target_e;
    const auto loads = build_port_loads<double>(batch);

    std::vector<double> weights, rates;
    size_t violations = 0;
    for (size_t j = 0; j < batch.size(); ++j) {
        const Coflow& c = batch.coflows[j];
        CoflowOutcome o;
        o.id = c.id;
        o.cct = ccts[j];
        o.release = c.release;
        o.isolation = c.release + loads.bottleneck_time(static_cast<int>(j));
        o.slowdown = experimental_slowdown(o.cct, o.isolation, o.release, c.phi);
        o.progress = c.total_volume() / (o.cct - o.release);
        // target_e <= 0 means "no slowdown target": stretch and violations
        // are identically zero.
        o.stretch = target_e > 0.0 ? std::max(0.0, o.slowdown / target_e - 1.0) : 0.0;
        o.violation = target_e > 0.0 && o.slowdown > target_e + kEps;
        violations += o.violation ? 1 : 0;
        rep.stretch_total += o.stretch;
        weights.push_back(c.weight);
        rates.push_back(o.progress);
        rep.coflows.push_back(o);
    }
    rep.weighted_cct = weighted_cct(ccts, weights);
    rep.jain = rates.empty() ? 0.0 : jain_index(rates);
    rep.violation_fraction =
        batch.size() == 0 ? 0.0 : static_cast<double>(violations) / static_cast<double>(batch.size());
    return rep;
}

std::string OutcomeReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "coflow,cct,isolation,release,slowdown,progress,stretch,violation\n";
    for (const CoflowOutcome& o : coflows) {
        os << o.id << ',' << o.cct << ',' << o.isolation << ',' << o.release << ',' << o.slowdown
           << ',' << o.progress << ',' << o.stretch << ',' << (o.violation ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string OutcomeReport::summary_json() const {
    nlohmann::json j;
    j["slowdown_target"] = slowdown_target;
    j["weighted_cct"] = weighted_cct;
    j["stretch_total"] = stretch_total;
    j["jain"] = jain;
    j["violation_fraction"] = violation_fraction;
    j["coflows"] = coflows.size();
    return j.dump(2);
}

}  // namespace coflow
