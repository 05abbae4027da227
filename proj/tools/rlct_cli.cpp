// Command-line front end: analyze a model end to end, or run the individual
// stages (K expansion, blow-up table, free-energy estimate, identity oracles).

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "rlct/fenergy.hpp"
#include "rlct/report.hpp"

namespace {

using namespace rlct;

struct CommonOptions {
    std::string model_path;
    int m_cap = 6;
    int cap = 0;  // 0: default 2*m_cap+2
    bool json = false;
};

AnalysisOptions to_analysis_options(const CommonOptions& opts) {
    AnalysisOptions out;
    out.m_cap = opts.m_cap;
    if (opts.cap > 0) out.cap = opts.cap;
    return out;
}

nlohmann::json rat_json(const Rat& x) {
    using boost::multiprecision::numerator;
    using boost::multiprecision::denominator;
    return {{"num", numerator(x).str()}, {"den", denominator(x).str()}};
}

int run_analyze(const CommonOptions& opts) {
    ModelSpec spec = parse_model_file(opts.model_path);
    AnalysisRun run = analyze(spec, to_analysis_options(opts));
    std::cout << (opts.json ? run.report.to_json() : run.report.to_text()) << "\n";
    return run.report.all_pass() ? 0 : 2;
}

int run_ktaylor(const CommonOptions& opts) {
    ModelSpec spec = parse_model_file(opts.model_path);
    AnalysisOptions aopts = to_analysis_options(opts);
    aopts.run_identity_suite = false;
    AnalysisRun run = analyze(spec, aopts);
    const auto names = run.normalization.param_names;
    if (opts.json) {
        nlohmann::json j;
        j["model"] = spec.name;
        j["params"] = names;
        nlohmann::json coeffs = nlohmann::json::array();
        for (const auto& [alpha, c] : run.kexp.poly.terms()) {
            nlohmann::json entry;
            entry["exponents"] = alpha.e;
            entry["coefficient"] = rat_json(c);
            coeffs.push_back(entry);
        }
        j["coefficients"] = coeffs;
        j["vanishing_pattern"] =
            run.normalization.maxed_out()
                ? "skipped"
                : (verify_vanishing(run.kexp).pass ? "pass" : "fail");
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "K(theta) expansion for " << spec.name << " (cap " << run.kexp.cap
              << ", final coordinates):\n";
    for (const auto& [alpha, c] : run.kexp.poly.terms()) {
        Polynomial<Rat> mono(run.kexp.poly.dim());
        mono.add_term(alpha, c);
        std::cout << "  " << to_string(alpha) << "  " << mono.str(names) << "\n";
    }
    if (!run.normalization.maxed_out()) {
        VanishingReport vr = verify_vanishing(run.kexp);
        std::cout << "vanishing pattern: " << (vr.pass ? "pass" : "FAIL") << "\n";
        for (const auto& [alpha, c] : vr.violations)
            std::cout << "  violation at " << to_string(alpha) << ": " << c << "\n";
    }
    return 0;
}

int run_blowup(const CommonOptions& opts) {
    ModelSpec spec = parse_model_file(opts.model_path);
    AnalysisOptions aopts = to_analysis_options(opts);
    aopts.run_identity_suite = false;
    AnalysisRun run = analyze(spec, aopts);
    if (!run.charts) {
        std::cerr << "no chart table: vanishing order exceeded the search cap\n";
        return 2;
    }
    const auto& table = *run.charts;
    const auto& names = run.normalization.param_names;
    if (opts.json) {
        nlohmann::json j;
        j["model"] = spec.name;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : table.rows) {
            nlohmann::json r;
            r["chart"] = row.chart.id(names);
            r["k"] = row.k.e;
            r["h"] = row.h.e;
            r["lambda"] = rat_json(row.chart_lambda);
            r["multiplicity"] = row.multiplicity;
            r["unit_positive_on_grid"] = row.unit_pass;
            r["touches_S"] = row.touches_s;
            rows.push_back(r);
        }
        j["rows"] = rows;
        j["lambda"] = rat_json(table.lambda);
        j["multiplicity"] = table.multiplicity;
        j["exceptional_set"] = table.exceptional_set;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "normal crossings per local coordinate (" << spec.name << "):\n";
    std::cout << "  chart           k           h           lambda   unit>0\n";
    for (const auto& row : table.rows) {
        std::ostringstream k_os, h_os, l_os;
        k_os << to_string(row.k);
        h_os << to_string(row.h);
        l_os << row.chart_lambda;
        std::cout << "  " << row.chart.id(names);
        for (std::size_t pad = row.chart.id(names).size(); pad < 16; ++pad) std::cout << ' ';
        std::cout << k_os.str();
        for (std::size_t pad = k_os.str().size(); pad < 12; ++pad) std::cout << ' ';
        std::cout << h_os.str();
        for (std::size_t pad = h_os.str().size(); pad < 12; ++pad) std::cout << ' ';
        std::cout << l_os.str();
        for (std::size_t pad = l_os.str().size(); pad < 9; ++pad) std::cout << ' ';
        std::cout << (row.unit_pass ? "yes" : "no") << (row.touches_s ? " (meets S)" : "")
                  << "\n";
    }
    std::cout << "overall lambda = " << table.lambda << " (multiplicity "
              << table.multiplicity << ")\n";
    if (!table.exceptional_set.empty())
        std::cout << "note: " << table.exceptional_set << "\n";
    return 0;
}

int run_fenergy(const CommonOptions& opts, const FEnergyConfig& config) {
    ModelSpec spec = parse_model_file(opts.model_path);
    AnalysisOptions aopts = to_analysis_options(opts);
    aopts.run_identity_suite = false;
    AnalysisRun run = analyze(spec, aopts);
    FEnergyEstimate est = estimate_lambda(spec, run.report.lambda, config);
    if (opts.json) {
        nlohmann::json j;
        j["model"] = spec.name;
        j["lambda_hat"] = est.lambda_hat;
        j["std_error"] = est.std_error;
        j["n_schedule"] = est.n_schedule;
        j["per_n_means"] = est.per_n_means;
        j["theoretical_lambda"] = rat_json(est.theoretical_lambda);
        j["box_half"] = est.box_half_used;
        j["pass"] = est.pass;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "free-energy estimate for " << spec.name << ":\n";
        for (std::size_t i = 0; i < est.n_schedule.size(); ++i)
            std::cout << "  n = " << est.n_schedule[i] << ": mean F_n^0 = "
                      << est.per_n_means[i] << "\n";
        std::cout << "lambda_hat = " << est.lambda_hat << " +- " << est.std_error
                  << " (theory " << est.theoretical_lambda << ")\n"
                  << "verdict: " << (est.pass ? "pass" : "fail") << "\n";
    }
    return est.pass ? 0 : 2;
}

int run_verify(const CommonOptions& opts) {
    ModelSpec spec = parse_model_file(opts.model_path);
    AnalysisOptions aopts = to_analysis_options(opts);
    AnalysisRun run = analyze(spec, aopts);
    bool all = true;
    for (const auto& v : run.report.verifications) {
        const char* status = v.status == Verification::Status::Pass ? "pass"
                             : v.status == Verification::Status::Fail ? "FAIL"
                                                                      : "skipped";
        if (v.status == Verification::Status::Fail) all = false;
        std::cout << v.name << ": " << status;
        if (!v.detail.empty()) std::cout << " (" << v.detail << ")";
        std::cout << "\n";
    }
    return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"learning-coefficient (RLCT) toolkit for semi-regular models"};
    app.require_subcommand(1);

    CommonOptions opts;
    FEnergyConfig fe_config;
    std::string schedule;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("model", opts.model_path, "model definition file")->required();
        cmd->add_option("--m-cap", opts.m_cap, "maximum vanishing order searched");
        cmd->add_option("--cap", opts.cap, "jet truncation degree override");
        cmd->add_flag("--json", opts.json, "emit JSON instead of text");
    };

    auto* analyze_cmd = app.add_subcommand("analyze", "full pipeline and report");
    add_common(analyze_cmd);
    auto* ktaylor_cmd = app.add_subcommand("ktaylor", "K Taylor coefficients + vanishing report");
    add_common(ktaylor_cmd);
    auto* blowup_cmd = app.add_subcommand("blowup", "blow-up chart table");
    add_common(blowup_cmd);
    auto* fenergy_cmd = app.add_subcommand("fenergy", "empirical lambda from free energy");
    add_common(fenergy_cmd);
    fenergy_cmd->add_option("--seed", fe_config.rng_seed, "RNG seed");
    fenergy_cmd->add_option("--grid", fe_config.grid_points_per_dim, "grid points per dimension");
    fenergy_cmd->add_option("--replicates", fe_config.replicates, "datasets per sample size");
    fenergy_cmd->add_option("--n-schedule", schedule, "comma-separated sample sizes");
    auto* verify_cmd = app.add_subcommand("verify", "identity oracles only");
    add_common(verify_cmd);

    CLI11_PARSE(app, argc, argv);

    if (!schedule.empty()) {
        fe_config.n_schedule.clear();
        std::istringstream is(schedule);
        std::string tok;
        while (std::getline(is, tok, ',')) fe_config.n_schedule.push_back(std::stoi(tok));
    }

    try {
        if (app.got_subcommand(analyze_cmd)) return run_analyze(opts);
        if (app.got_subcommand(ktaylor_cmd)) return run_ktaylor(opts);
        if (app.got_subcommand(blowup_cmd)) return run_blowup(opts);
        if (app.got_subcommand(fenergy_cmd)) return run_fenergy(opts, fe_config);
        if (app.got_subcommand(verify_cmd)) return run_verify(opts);
    } catch (const rlct::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == rlct::Error::Kind::InconsistentVerifications ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
