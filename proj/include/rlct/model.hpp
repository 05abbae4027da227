#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rlct/expr.hpp"
#include "rlct/rational.hpp"
#include "rlct/series.hpp"

namespace rlct {

// The true distribution q(x) := p(x|θ*). `support` lists the indices of
// outcomes with q > 0; random variables live on exactly these outcomes.
struct TrueDistribution {
    std::vector<Rat> weights;   // one per declared outcome
    std::vector<int> support;   // outcome indices with q(x) > 0

    int support_size() const { return static_cast<int>(support.size()); }
    Rat q(int support_slot) const { return weights[support[support_slot]]; }
};

struct ModelSpec {
    std::string name;
    std::vector<std::string> params;     // defines d and index order
    std::vector<std::string> outcomes;   // labels, length >= 2
    std::vector<ExprPtr> prob_exprs;     // one per outcome
    std::vector<Rat> theta_star;
    bool theta_star_unique = false;      // optional per-model flag

    int d() const { return static_cast<int>(params.size()); }
    int n_outcomes() const { return static_cast<int>(outcomes.size()); }
    int outcome_index(const std::string& label) const;

    TrueDistribution true_distribution() const;
};

// Model-definition text format (see README). Throws ParseError with
// line/column on malformed input; enforces Σ_x p(x|θ*) = 1 and q(x) ≥ 0.
ModelSpec parse_model(const std::string& text, const std::string& name = "model");
ModelSpec parse_model_file(const std::string& path);

std::string pretty_print(const ModelSpec& spec);

// Jet of p(outcome | θ* + u) in u around 0, exact.
Jet<Rat> evaluate_prob_jet(const ModelSpec& spec, int outcome, int cap);

// Jet of f(outcome|θ*+u) = log p(outcome|θ*) − log p(outcome|θ*+u); constant
// term is exactly 0. Computed as −log(p-jet / q(x)) so the log argument has
// unit constant term and rational arithmetic stays exact.
Jet<Rat> f_jet(const ModelSpec& spec, int outcome, int cap);

struct DiagnosticsReport {
    bool normalization_ok = false;            // Σ_x p-jets == 1 identically up to cap
    std::optional<MultiIndex> offending;      // first violating multi-index
    Rat offending_value;
    bool weights_nonnegative = false;
    std::vector<int> support;                 // outcome indices with q > 0
    bool pass() const { return normalization_ok && weights_nonnegative; }
};

// Verifies the normalization identity Σ_x p(x|θ) = 1 as jets (catching
// non-probability expressions), q(x) ≥ 0, and records the support.
DiagnosticsReport check_model(const ModelSpec& spec, int cap);

}  // namespace rlct
