// Command-line front end: batch generation, slowdown estimation, feasibility
// checks, scheduling, simulation, LP oracles and the experiment pipeline.
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "coflow/cofair.hpp"
#include "coflow/experiment.hpp"
#include "coflow/io.hpp"
#include "coflow/lp_oracle.hpp"
#include "coflow/metrics.hpp"
#include "coflow/mps.hpp"
#include "coflow/sim.hpp"
#include "coflow/workload.hpp"

namespace {

using nlohmann::json;
using namespace coflow;

void apply_phi_mode(Batch& batch, const std::string& mode) {
    if (mode == "file") return;
    for (Coflow& c : batch.coflows) c.phi = mode == "volume" ? c.total_volume() : 1.0;
    batch.validate();
}

std::vector<CoflowId> parse_order(const std::string& text) {
    // Either a comma-separated id list or a JSON file holding {"sigma": [...]}.
    if (std::filesystem::exists(text)) {
        json doc = json::parse(read_file(text));
        if (doc.is_array()) return doc.get<std::vector<CoflowId>>();
        return doc.at("sigma").get<std::vector<CoflowId>>();
    }
    std::vector<CoflowId> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

json sigma_json(const SigmaOrder<double>& order) {
    json j;
    j["sigma"] = order.sigma;
    j["completion_bounds"] = order.completion;
    return j;
}

int cmd_gen(const GenConfig& cfg, const std::string& out) {
    const Batch batch = generate(cfg);
    const std::string text = batch_to_json(batch);
    if (out.empty()) std::cout << text << "\n";
    else write_file(out, text);
    return 0;
}

int cmd_mps(const std::string& file, const std::string& phi) {
    Batch batch = load_batch(file);
    apply_phi_mode(batch, phi);
    const auto res = mps<double>(batch);
    json j;
    j["min_slowdown"] = res.min_slowdown;
    j["ranking"] = res.order;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_feascheck(const std::string& file, double level, const std::string& phi,
                  const std::string& order_text) {
    Batch batch = load_batch(file);
    apply_phi_mode(batch, phi);
    const auto dl = deadlines<double>(batch, level);
    json j;
    j["E"] = level;
    if (!order_text.empty()) {
        const auto sigma = parse_order(order_text);
        const auto check = primal_feasible(batch, sigma, dl);
        j["order"] = sigma;
        j["feasible"] = check.feasible;
        if (check.violation) {
            j["violation"] = {{"port", check.violation->port},
                              {"position", check.violation->position},
                              {"coflow", check.violation->coflow},
                              {"excess", check.violation->excess}};
        }
    } else {
        const auto res = edd_feasible_order(batch, dl);
        j["feasible"] = res.feasible;
        if (res.feasible) j["order"] = sigma_json(res.order);
        else if (res.violation)
            j["violation"] = {{"port", res.violation->port},
                              {"position", res.violation->position},
                              {"coflow", res.violation->coflow},
                              {"excess", res.violation->excess}};
    }
    std::cout << j.dump(2) << "\n";
    return j["feasible"].get<bool>() ? 0 : 3;
}

int cmd_cofair(const std::string& file, const std::string& e_text, const std::string& phi,
               const std::string& alpha_file, bool sincronia) {
    Batch batch = load_batch(file);
    apply_phi_mode(batch, phi);

    std::vector<double> w, alpha(batch.size(), 0.0);
    for (const Coflow& c : batch.coflows) w.push_back(c.weight);
    if (!alpha_file.empty()) {
        json doc = json::parse(read_file(alpha_file));
        alpha = doc.get<std::vector<double>>();
    }

    DeadlineVector<double> dl = DeadlineVector<double>::unbounded(batch.size());
    double level = 0.0;
    if (!sincronia) {
        level = e_text == "auto" ? mps<double>(batch).min_slowdown : std::stod(e_text);
        dl = deadlines<double>(batch, level);
    }

    const auto run = cofair<double>(batch, dl, w, alpha);
    json j;
    j["mode"] = sincronia ? "sincronia" : "cofair";
    if (!sincronia) j["E"] = level;
    j["feasible"] = run.feasible;
    if (run.feasible) {
        j["order"] = sigma_json(run.order);
        json entries = json::array();
        for (const auto& e : run.certificate.entries) {
            json je;
            je["port"] = e.port;
            je["y"] = e.y;
            json set = json::array();
            for (int col : e.tail_set) set.push_back(batch.coflows[(size_t)col].id);
            je["tail_set"] = set;
            je["pivot"] = batch.coflows[(size_t)e.pivot_column].id;
            entries.push_back(je);
        }
        j["certificate"] = {{"entries", entries}, {"alpha", alpha}};
        const auto audit = dual_audit(batch, run, w, alpha, dl);
        j["audit"] = {{"ok", audit.ok()},
                      {"constraints", audit.constraints_ok},
                      {"weak_duality", audit.weak_duality_ok},
                      {"nonnegative", audit.nonnegative_ok},
                      {"dual_objective", audit.dual_objective}};
    } else {
        j["infeasible_step"] = run.infeasible->step;
        j["pivot_port"] = run.infeasible->pivot;
    }
    std::cout << j.dump(2) << "\n";
    return run.feasible ? 0 : 3;
}

int cmd_simulate(const std::string& file, const std::string& order_text, bool trace,
                 const std::string& csv_out) {
    Batch batch = load_batch(file);
    const auto sigma = parse_order(order_text);
    SimOptions opts;
    opts.record_trace = trace;
    const auto sim = simulate<double>(batch, sigma, opts);
    const auto ccts = cct_doubles(sim);

    // Violations judged against the plain minimum slowdown when releases are
    // zero; otherwise only raw metrics are reported.
    double target = 0.0;
    if (batch.all_released_at_zero()) target = mps<double>(batch).min_slowdown;
    const auto report = make_report(batch, ccts, target);

    if (!csv_out.empty()) write_file(csv_out, report.to_csv());
    json j = json::parse(report.summary_json());
    j["cct"] = ccts;
    if (trace) {
        json jt = json::array();
        for (const auto& iv : sim.trace) {
            json ji;
            ji["start"] = iv.start;
            ji["length"] = iv.length;
            ji["rates"] = iv.rates;
            jt.push_back(ji);
        }
        j["trace"] = jt;
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_oracle_min_slowdown(const std::string& file, const std::string& phi, double dt,
                            double tol) {
    Batch batch = load_batch(file);
    apply_phi_mode(batch, phi);
    const auto res = min_slowdown_lp(batch, rat_from_double(dt), rat_from_double(tol));
    json j;
    j["min_slowdown_lp"] = rat_to_double(res.level);
    j["exact"] = res.level.str();
    j["lp_solves"] = res.lp_solves;
    if (batch.all_released_at_zero())
        j["min_primal_slowdown"] = mps<double>(batch).min_slowdown;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_experiment(const std::string& spec_file, const std::string& out_dir, int jobs) {
    const auto spec = ExperimentSpec::from_json(read_file(spec_file));
    const auto result = run_experiment(spec, jobs);
    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/results.csv", result.rows_csv());
    write_file(out_dir + "/summary.json", result.summary_json());
    std::cout << result.summary_json() << "\n";
    if (!result.invariants_ok) {
        std::cerr << "error: primal feasibility re-verification failed\n";
        return 4;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fair coflow scheduling toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic coflow batch");
    gen->require_subcommand(1);
    GenConfig cfg;
    std::string gen_out, gen_phi = "unit", gen_law = "exponential";
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--N", cfg.N, "Number of coflows")->required();
        sub->add_option("--M", cfg.M, "Number of servers")->required();
        sub->add_option("--seed", cfg.seed, "Random seed");
        sub->add_option("--mean", cfg.mean_volume, "Mean flow volume");
        sub->add_option("--law", gen_law, "Volume law: exponential|gamma");
        sub->add_option("--sd", cfg.gamma_sd, "Std dev for the gamma law");
        sub->add_option("--phi", gen_phi, "Slowdown weights: unit|volume");
        sub->add_option("--out", gen_out, "Output file (stdout if omitted)");
    };
    auto* wn = gen->add_subcommand("wn", "Wide-narrow batch");
    wn->add_option("--q", cfg.q, "Fraction of wide coflows");
    add_common(wn);
    auto* mr = gen->add_subcommand("mr", "Map-reduce batch");
    mr->add_option("--m", cfg.mappers, "Max mappers")->required();
    mr->add_option("--r", cfg.reducers, "Max reducers")->required();
    add_common(mr);

    // mps
    auto* mps_cmd = app.add_subcommand("mps", "Minimum primal slowdown of a batch");
    std::string batch_file, phi_mode = "file";
    mps_cmd->add_option("batch", batch_file, "Batch file (.json/.csv)")->required();
    mps_cmd->add_option("--phi", phi_mode, "unit|volume|file");

    // feascheck
    auto* feas = app.add_subcommand("feascheck", "Primal feasibility at a slowdown level");
    std::string feas_file, feas_phi = "file", feas_order;
    double feas_e = 0.0;
    feas->add_option("batch", feas_file)->required();
    feas->add_option("--E", feas_e, "Slowdown level")->required();
    feas->add_option("--phi", feas_phi, "unit|volume|file");
    feas->add_option("--order", feas_order, "Check this order instead of constructing one");

    // cofair
    auto* cf = app.add_subcommand("cofair", "Slowdown-constrained primal-dual scheduler");
    std::string cf_file, cf_e = "auto", cf_phi = "file", cf_alpha;
    bool cf_sincronia = false;
    cf->add_option("batch", cf_file)->required();
    cf->add_option("--E", cf_e, "Slowdown level or 'auto'");
    cf->add_option("--phi", cf_phi, "unit|volume|file");
    cf->add_option("--alpha", cf_alpha, "JSON file with multipliers");
    cf->add_flag("--sincronia", cf_sincronia, "Disable slowdown constraints");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Greedy rate-allocation simulation");
    std::string sim_file, sim_order, sim_csv;
    bool sim_trace = false;
    sim_cmd->add_option("batch", sim_file)->required();
    sim_cmd->add_option("--order", sim_order, "Priority order (id list or JSON)")->required();
    sim_cmd->add_flag("--trace", sim_trace, "Emit per-interval rate assignments");
    sim_cmd->add_option("--csv", sim_csv, "Write the per-coflow report CSV here");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Exact LP oracles");
    auto* minsd = oracle->add_subcommand("min-slowdown", "Minimum LP-feasible slowdown");
    std::string or_file, or_phi = "file";
    double or_dt = 1.0, or_tol = 1e-3;
    minsd->add_option("batch", or_file)->required();
    minsd->add_option("--phi", or_phi, "unit|volume|file");
    minsd->add_option("--dt", or_dt, "Slot duration");
    minsd->add_option("--tol", or_tol, "Upper-bound expansion tolerance");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Experiment pipeline");
    auto* exp_run = exp->add_subcommand("run", "Run an experiment spec");
    std::string exp_spec, exp_out = "experiment-out";
    int exp_jobs = 0;
    exp_run->add_option("spec", exp_spec, "Experiment spec JSON")->required();
    exp_run->add_option("--out", exp_out, "Output directory");
    exp_run->add_option("--jobs", exp_jobs, "Worker count (default: COFLOW_JOBS or hw)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            cfg.kind = wn->parsed() ? GenKind::WN : GenKind::MR;
            cfg.law = gen_law == "gamma" ? VolumeLaw::Gamma : VolumeLaw::Exponential;
            cfg.phi = gen_phi == "volume" ? PhiMode::Volume : PhiMode::Unit;
            return cmd_gen(cfg, gen_out);
        }
        if (mps_cmd->parsed()) return cmd_mps(batch_file, phi_mode);
        if (feas->parsed()) return cmd_feascheck(feas_file, feas_e, feas_phi, feas_order);
        if (cf->parsed()) return cmd_cofair(cf_file, cf_e, cf_phi, cf_alpha, cf_sincronia);
        if (sim_cmd->parsed()) return cmd_simulate(sim_file, sim_order, sim_trace, sim_csv);
        if (oracle->parsed()) return cmd_oracle_min_slowdown(or_file, or_phi, or_dt, or_tol);
        if (exp->parsed()) return cmd_experiment(exp_spec, exp_out, exp_jobs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
