#include "rlct/report.hpp"

#include <sstream>

#include "json.hpp"

namespace rlct {

Rat lambda_formula(int d, int r, std::optional<int> m) {
    if (d < 1 || r < 1 || r > d)
        throw Error(Error::Kind::InvalidDims, "lambda_formula needs 1 <= r <= d");
    if (!m) return Rat(r, 2);
    if (*m < 1) throw Error(Error::Kind::InvalidDims, "lambda_formula needs m >= 1");
    return Rat(d - r + r * *m, 2 * *m);
}

Rat lambda_r_ge_dm1(int d, std::optional<int> m) {
    if (d < 1 || (m && *m < 1))
        throw Error(Error::Kind::InvalidDims, "lambda_r_ge_dm1 needs d >= 1, m >= 1");
    Rat out = m ? Rat(1 + (d - 1) * *m, 2 * *m) : Rat(d - 1, 2);
    if (d >= 2 && out != lambda_formula(d, d - 1, m))
        throw Error(Error::Kind::Internal, "r = d-1 specialization mismatch");
    return out;
}

Table2Row classify_two_param(const NormalizationResult& res) {
    if (res.dim() != 2)
        throw Error(Error::Kind::WrongDimension, "two-parameter classification needs d = 2");
    Table2Row row;
    if (res.r == 2) {
        row.lambda = Rat(1);
        row.ideal = "(theta1, theta2)";
        row.geometry = "point {theta = 0}";
    } else if (res.m) {
        int m = *res.m;
        row.lambda = Rat(m + 1, 2 * m);
        row.ideal = "(theta1, theta2^" + std::to_string(m) + ")";
        row.geometry = "point {theta = 0}";
    } else {
        row.lambda = Rat(1, 2);
        row.ideal = "(theta1)";
        row.geometry = "line {theta1 = 0}";
    }
    return row;
}

MixtureSigma mixture_sigma(const std::vector<Rat>& T) {
    const int n = static_cast<int>(T.size());
    if (n < 1) throw Error(Error::Kind::InvalidWeights, "mixture_sigma needs weights");
    Rat total = 0;
    for (const auto& t : T) {
        if (t < 0 || t > 1)
            throw Error(Error::Kind::InvalidWeights, "mixture weights must lie in [0,1]");
        total += t;
    }
    if (total > 1)
        throw Error(Error::Kind::InvalidWeights, "mixture weights must sum to at most 1");

    MixtureSigma out;
    out.sigma = Matrix<Rat>(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.sigma(i, j) = i == j ? T[i] * (1 - total + T[i]) : T[i] * T[j];
    out.det = determinant(out.sigma);
    out.closed_form = 1;
    for (int k = 0; k < n - 1; ++k) out.closed_form *= (1 - total);
    for (const auto& t : T) out.closed_form *= t;
    if (out.det != out.closed_form)
        throw Error(Error::Kind::Internal, "sigma determinant identity failed");
    out.positive_definite =
        analyze_quadratic_form(out.sigma).kind == QuadraticFormAnalysis::Kind::PositiveDefinite;
    out.condition_i = total != 1;
    for (const auto& t : T)
        if (!(t > 0 && t < 1)) out.condition_i = false;
    return out;
}

bool AnalysisReport::all_pass() const {
    for (const auto& v : verifications)
        if (v.status == Verification::Status::Fail) return false;
    return true;
}

namespace {

nlohmann::json rat_json(const Rat& x) {
    using boost::multiprecision::numerator;
    using boost::multiprecision::denominator;
    return {{"num", numerator(x).str()}, {"den", denominator(x).str()}};
}

const char* status_name(Verification::Status s) {
    switch (s) {
        case Verification::Status::Pass: return "pass";
        case Verification::Status::Fail: return "fail";
        default: return "skipped";
    }
}

}  // namespace

std::string AnalysisReport::to_json() const {
    nlohmann::json j;
    j["model"] = model;
    j["d"] = d;
    j["r"] = r;
    if (vanishing_order) j["vanishing_order"] = *vanishing_order;
    else j["vanishing_order"] = "maxed_out";
    j["m_cap"] = m_cap;
    j["lambda"] = rat_json(lambda);
    j["multiplicity"] = multiplicity;
    j["assumption3"] = assumption3;
    j["semantics"] =
        semantics == Semantics::ExactRLCTAtPoint ? "ExactRLCTAtPoint" : "UpperBoundOnly";
    j["theta_star_unique"] = theta_star_unique;
    j["learning_coefficient"] =
        theta_star_unique ? "equal to lambda" : "bounded above by lambda";
    j["params"] = param_names;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& v : verifications)
        checks.push_back({{"name", v.name}, {"status", status_name(v.status)},
                          {"detail", v.detail}});
    j["verifications"] = checks;
    j["transforms"] = transforms;
    return j.dump(2);
}

std::string AnalysisReport::to_text() const {
    std::ostringstream os;
    os << "model: " << model << "\n";
    os << "d = " << d << ", r = " << r << ", m = ";
    if (vanishing_order) os << *vanishing_order;
    else os << "infinity (within search cap " << m_cap << ")";
    os << "\n";
    os << "lambda = " << lambda << " (multiplicity " << multiplicity << ")\n";
    os << "assumption 3: " << assumption3 << "\n";
    os << "semantics: "
       << (semantics == Semantics::ExactRLCTAtPoint ? "exact RLCT at theta_star"
                                                    : "upper bound only")
       << "\n";
    os << "learning coefficient: "
       << (theta_star_unique ? "equal to lambda (theta_star is the only realizable point)"
                             : "bounded above by lambda (other realizable points may exist)")
       << "\n";
    if (!transforms.empty()) {
        os << "transforms:\n";
        for (const auto& t : transforms) os << "  " << t << "\n";
    }
    os << "verifications:\n";
    for (const auto& v : verifications) {
        os << "  " << v.name << ": " << status_name(v.status);
        if (!v.detail.empty()) os << " (" << v.detail << ")";
        os << "\n";
    }
    return os.str();
}

AnalysisRun analyze(const ModelSpec& spec, const AnalysisOptions& options) {
    AnalysisRun run;
    run.spec = spec;
    run.diagnostics = check_model(spec, options.cap.value_or(2 * options.m_cap + 2));
    run.normalization = normalize_model(spec, options.m_cap, options.cap);
    run.assumption3 = check_assumption3(run.normalization, options.a3);
    run.kexp = k_taylor(run.normalization);

    AnalysisReport& report = run.report;
    report.model = spec.name;
    report.d = spec.d();
    report.r = run.normalization.r;
    report.vanishing_order = run.normalization.m;
    report.m_cap = options.m_cap;
    report.theta_star_unique = spec.theta_star_unique;
    report.assumption3 = describe(run.assumption3);
    report.param_names = run.normalization.param_names;
    for (const auto& t : run.normalization.transforms)
        report.transforms.push_back(t.describe(run.normalization.param_names));

    auto add = [&](const std::string& name, Verification::Status status,
                   const std::string& detail = "") {
        report.verifications.push_back({name, status, detail});
    };
    using Status = Verification::Status;

    add("model-normalization", run.diagnostics.pass() ? Status::Pass : Status::Fail,
        run.diagnostics.pass() ? "" : "sum of probabilities is not identically 1");

    Rat formula = lambda_formula(report.d, report.r, report.vanishing_order);

    if (!run.normalization.maxed_out()) {
        VanishingReport vr = verify_vanishing(run.kexp);
        add("vanishing-pattern", vr.pass ? Status::Pass : Status::Fail,
            vr.pass ? "" : "nonzero coefficient at " + to_string(vr.violations.front().first));
        try {
            run.leading = leading_form(run.normalization, run.kexp);
            add("leading-form", Status::Pass);
        } catch (const Error& e) {
            add("leading-form", Status::Fail, e.what());
        }
        FmDecomposition fm = fm_decomposition(run.normalization);
        run.charts = chart_table(run.kexp.poly.truncated(2 * *run.normalization.m + 2),
                                 run.normalization, fm);
        bool agree = run.charts->lambda == formula;
        add("chart-table", agree ? Status::Pass : Status::Fail,
            agree ? "chart minimum matches the closed formula"
                  : "chart minimum disagrees with the closed formula");
        if (!agree)
            throw Error(Error::Kind::InconsistentVerifications,
                        "chart table and closed formula disagree: " +
                            to_string(run.charts->lambda) + " vs " + to_string(formula));
    } else {
        add("vanishing-pattern", Status::Skipped, "vanishing order exceeded the search cap");
        add("chart-table", Status::Skipped, "vanishing order exceeded the search cap");
    }

    if (options.run_identity_suite) {
        IdentityReport p1 = verify_prop1(spec, 4);
        add("prop1-identities", p1.pass ? Status::Pass : Status::Fail,
            p1.pass ? std::to_string(p1.checks) + " identities" : p1.first_failure);
        if (!run.normalization.maxed_out() && *run.normalization.m <= 2 &&
            run.normalization.r < report.d) {
            IdentityReport pt = verify_prop_taylor(run.normalization);
            add("prop-taylor", pt.pass ? Status::Pass : Status::Fail,
                pt.pass ? std::to_string(pt.checks) + " identities" : pt.first_failure);
        } else {
            add("prop-taylor", Status::Skipped,
                run.normalization.maxed_out() ? "no finite vanishing order" : "needs m <= 2, r < d");
        }
    }

    report.lambda = run.charts ? run.charts->lambda : formula;
    report.multiplicity = run.charts ? run.charts->multiplicity : 1;
    if (report.lambda > Rat(report.d, 2))
        throw Error(Error::Kind::Internal, "lambda exceeds d/2");

    bool exact = std::holds_alternative<AllDirectionsII>(run.assumption3) &&
                 !run.normalization.maxed_out() &&
                 !(run.charts && run.charts->upper_bound_only);
    report.semantics = exact ? Semantics::ExactRLCTAtPoint : Semantics::UpperBoundOnly;
    return run;
}

}  // namespace rlct
