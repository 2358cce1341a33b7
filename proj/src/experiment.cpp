#include "coflow/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "coflow/cofair.hpp"
#include "coflow/mps.hpp"
#include "coflow/sim.hpp"

namespace coflow {

using nlohmann::json;

std::string SchedulerSpec::name() const {
    if (kind == Kind::Sincronia) return "sincronia";
    std::ostringstream os;
    os << "cofair";
    if (e_multiplier != 1.0) os << "x" << e_multiplier;
    return os.str();
}

void ExperimentSpec::validate() const {
    generator.validate();
    if (repetitions < 1) throw model_error("experiment: repetitions must be >= 1");
    if (schedulers.empty()) throw model_error("experiment: no schedulers");
    for (const auto& s : schedulers)
        if (s.kind == SchedulerSpec::Kind::Cofair && s.e_multiplier < 1.0)
            throw model_error("experiment: cofair multiplier must be >= 1");
}

ExperimentSpec ExperimentSpec::from_json(const std::string& text) {
    json doc = json::parse(text);
    ExperimentSpec spec;
    const auto& g = doc.at("generator");
    const std::string kind = g.at("kind").get<std::string>();
    spec.generator.kind = kind == "mr" ? GenKind::MR : GenKind::WN;
    spec.generator.N = g.at("N").get<int>();
    spec.generator.M = g.at("M").get<int>();
    spec.generator.q = g.value("q", 0.2);
    spec.generator.mappers = g.value("m", 1);
    spec.generator.reducers = g.value("r", 1);
    spec.generator.mean_volume = g.value("mean_volume", 10.0);
    spec.generator.law = g.value("law", std::string("exponential")) == "gamma"
                             ? VolumeLaw::Gamma
                             : VolumeLaw::Exponential;
    spec.generator.gamma_sd = g.value("sd", 3.0);
    spec.generator.phi = g.value("phi", std::string("unit")) == "volume" ? PhiMode::Volume
                                                                         : PhiMode::Unit;
    spec.repetitions = doc.value("repetitions", 1);
    spec.seed = doc.value("seed", 0ULL);
    spec.generator.seed = spec.seed;   // per-instance seeds derive from this
    for (const auto& js : doc.at("schedulers")) {
        SchedulerSpec s;
        if (js.is_string()) {
            s.kind = js.get<std::string>() == "sincronia" ? SchedulerSpec::Kind::Sincronia
                                                          : SchedulerSpec::Kind::Cofair;
        } else {
            s.kind = js.at("kind").get<std::string>() == "sincronia"
                         ? SchedulerSpec::Kind::Sincronia
                         : SchedulerSpec::Kind::Cofair;
            s.e_multiplier = js.value("e_multiplier", 1.0);
        }
        spec.schedulers.push_back(s);
    }
    spec.validate();
    return spec;
}

namespace {

std::vector<InstanceResult> run_instance(const ExperimentSpec& spec, int instance) {
    GenConfig cfg = spec.generator;
    cfg.seed = substream_seed(spec.seed, 0x10000ULL + static_cast<std::uint64_t>(instance));
    const Batch batch = generate(cfg);

    const auto est = mps<double>(batch);
    const double ep = est.min_slowdown;

    std::vector<double> w, zero;
    for (const Coflow& c : batch.coflows) {
        w.push_back(c.weight);
        zero.push_back(0.0);
    }

    std::vector<InstanceResult> out;
    for (const auto& sched : spec.schedulers) {
        InstanceResult row;
        row.instance = instance;
        row.scheduler = sched.name();
        row.min_slowdown = ep;
        try {
            DeadlineVector<double> dl = DeadlineVector<double>::unbounded(batch.size());
            if (sched.kind == SchedulerSpec::Kind::Cofair) {
                row.target_e = sched.e_multiplier * ep;
                dl = deadlines<double>(batch, row.target_e);
            }
            auto run = cofair<double>(batch, dl, w, zero);
            if (!run.feasible) {
                row.failure = "scheduler reported infeasible at step " +
                              std::to_string(run.infeasible->step);
                out.push_back(std::move(row));
                continue;
            }
            row.scheduled = true;
            row.sigma = run.order.sigma;
            row.reverified = primal_feasible(batch, row.sigma, dl).feasible;
            const auto sim = simulate<double>(batch, row.sigma);
            row.report = make_report(batch, cct_doubles(sim), ep);
        } catch (const std::exception& e) {
            row.scheduled = false;
            row.failure = e.what();
        }
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, int jobs) {
    spec.validate();
    if (jobs <= 0) {
        if (const char* env = std::getenv("COFLOW_JOBS")) jobs = std::atoi(env);
        if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
        if (jobs <= 0) jobs = 1;
    }

    std::vector<std::vector<InstanceResult>> slots(static_cast<size_t>(spec.repetitions));
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex err_mu;

    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= spec.repetitions || failed.load()) return;
            try {
                slots[static_cast<size_t>(i)] = run_instance(spec, i);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (first_error.empty()) first_error = e.what();
                failed.store(true);
            }
        }
    };
    std::vector<std::thread> pool;
    const int nthreads = std::min(jobs, spec.repetitions);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) throw std::runtime_error("experiment failed: " + first_error);

    ExperimentResult res;
    for (auto& s : slots)
        for (auto& row : s) {
            if (row.scheduled && !row.reverified) res.invariants_ok = false;
            res.rows.push_back(std::move(row));
        }
    return res;
}

std::string ExperimentResult::rows_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "instance,scheduler,coflow,cct,isolation,slowdown,stretch,violation\n";
    for (const InstanceResult& r : rows) {
        if (!r.scheduled) continue;
        for (const CoflowOutcome& o : r.report.coflows) {
            os << r.instance << ',' << r.scheduler << ',' << o.id << ',' << o.cct << ','
               << o.isolation << ',' << o.slowdown << ',' << o.stretch << ','
               << (o.violation ? 1 : 0) << '\n';
        }
    }
    return os.str();
}

std::string ExperimentResult::summary_json() const {
    // Group rows by scheduler.
    std::vector<std::string> names;
    for (const InstanceResult& r : rows)
        if (std::find(names.begin(), names.end(), r.scheduler) == names.end())
            names.push_back(r.scheduler);

    json summary;
    summary["invariants_ok"] = invariants_ok;

    // Per-instance weighted CCT of the unconstrained baseline, for
    // normalization.
    std::map<int, double> sincronia_wcct;
    for (const InstanceResult& r : rows)
        if (r.scheduler == "sincronia" && r.scheduled)
            sincronia_wcct[r.instance] = r.report.weighted_cct;

    json per_sched = json::object();
    for (const std::string& name : names) {
        double wcct_sum = 0.0, wcct_norm_sum = 0.0, jain_sum = 0.0, viol_sum = 0.0;
        int count = 0, failures = 0, normalized = 0;
        std::vector<double> slowdown_ratio, stretch_samples;
        for (const InstanceResult& r : rows) {
            if (r.scheduler != name) continue;
            if (!r.scheduled) {
                ++failures;
                continue;
            }
            ++count;
            wcct_sum += r.report.weighted_cct;
            jain_sum += r.report.jain;
            viol_sum += r.report.violation_fraction;
            auto it = sincronia_wcct.find(r.instance);
            if (it != sincronia_wcct.end() && it->second > 0.0) {
                wcct_norm_sum += r.report.weighted_cct / it->second;
                ++normalized;
            }
            for (const CoflowOutcome& o : r.report.coflows) {
                slowdown_ratio.push_back(o.slowdown / r.report.slowdown_target);
                stretch_samples.push_back(o.stretch);
            }
        }
        json js;
        js["instances"] = count;
        js["failures"] = failures;
        if (count > 0) {
            js["mean_weighted_cct"] = wcct_sum / count;
            js["mean_jain"] = jain_sum / count;
            js["violation_fraction"] = viol_sum / count;
            if (normalized > 0) js["mean_weighted_cct_vs_sincronia"] = wcct_norm_sum / normalized;
            json cc = json::array();
            for (const auto& [v, p] : ccdf(slowdown_ratio)) cc.push_back(json::array({v, p}));
            js["ccdf_slowdown_over_target"] = cc;
            json cs = json::array();
            for (const auto& [v, p] : ccdf(stretch_samples)) cs.push_back(json::array({v, p}));
            js["ccdf_stretch"] = cs;
        }
        per_sched[name] = std::move(js);
    }
    summary["schedulers"] = std::move(per_sched);
    return summary.dump(2);
}

std::vector<std::pair<double, double>> ccdf(const std::vector<double>& samples) {
    if (samples.empty()) throw std::invalid_argument("ccdf: empty input");
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, double>> out;
    const double n = static_cast<double>(sorted.size());
    for (size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i] == sorted[i - 1]) continue;
        out.emplace_back(sorted[i], static_cast<double>(sorted.size() - i) / n);
    }
    return out;
}

}  // namespace coflow
