#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rlct/blowup.hpp"
#include "rlct/kseries.hpp"
#include "rlct/normalize.hpp"

namespace rlct {

// λ_O = (d−r+rm)/(2m) in lowest terms; m = nullopt means m = ∞ and yields r/2.
Rat lambda_formula(int d, int r, std::optional<int> m);

// (1+(d−1)m)/(2m); the r ≥ d−1 specialization of the formula above.
Rat lambda_r_ge_dm1(int d, std::optional<int> m);

struct Table2Row {
    Rat lambda;
    int multiplicity = 1;
    std::string ideal;
    std::string geometry;
};

// The two-parameter classification: r=2 → λ=1; r=1 finite m → (m+1)/(2m);
// r=1 maxed out → 1/2 with Θ* locally the line {θ_1 = 0}.
Table2Row classify_two_param(const NormalizationResult& res);

struct MixtureSigma {
    Matrix<Rat> sigma;
    Rat det;
    Rat closed_form;          // (1−ΣT)^(N−1)·ΠT, which the determinant must equal
    bool positive_definite;   // exact, from the matrix itself
    bool condition_i;         // all 0 < T_i < 1 and ΣT ≠ 1
};

// Σ_N of the constant-mixing-ratio family with an exact determinant check.
MixtureSigma mixture_sigma(const std::vector<Rat>& T);

enum class Semantics { ExactRLCTAtPoint, UpperBoundOnly };

struct Verification {
    std::string name;
    enum class Status { Pass, Fail, Skipped } status;
    std::string detail;
};

struct AnalysisReport {
    std::string model;
    int d = 0;
    int r = 0;
    std::optional<int> vanishing_order;  // m; nullopt = maxed out at m_cap
    int m_cap = 6;
    Rat lambda;
    int multiplicity = 1;
    std::string assumption3;
    Semantics semantics = Semantics::UpperBoundOnly;
    bool theta_star_unique = false;
    std::vector<Verification> verifications;
    std::vector<std::string> transforms;
    std::vector<std::string> param_names;

    bool all_pass() const;
    std::string to_json() const;
    std::string to_text() const;
};

// Full pipeline output; the CLI and the tests drive analysis through this.
struct AnalysisRun {
    ModelSpec spec;
    DiagnosticsReport diagnostics;
    NormalizationResult normalization;
    Assumption3Status assumption3;
    KExpansion kexp;
    std::optional<Polynomial<Rat>> leading;
    std::optional<ChartTable> charts;
    AnalysisReport report;
};

struct AnalysisOptions {
    int m_cap = 6;
    std::optional<int> cap;       // jet truncation override (default 2·m_cap+2)
    Assumption3Config a3;
    bool run_identity_suite = true;   // prop1 / prop-taylor oracles
};

AnalysisRun analyze(const ModelSpec& spec, const AnalysisOptions& options = {});

}  // namespace rlct
