#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rlct/model.hpp"
#include "rlct/stochlin.hpp"

namespace rlct {

// θ'_k = θ_k + c_k/(∏ i_h!)·θ^monomial for each targeted k ≤ r; identity on
// the other coordinates. The monomial is supported on positions r..d-1.
struct ShearTransform {
    std::vector<int> targets;       // 0-based positions in [0, r)
    std::vector<Rat> coefficients;  // c_k per target (derivative-space)
    MultiIndex monomial;            // full dim, zero on positions < r
    Rat normalizer;                 // 1/(∏ i_h!)

    // coordinate images for applying the shear to a function's jet:
    // θ_k ↦ θ_k − c_k·normalizer·θ^monomial
    std::vector<Polynomial<Rat>> substitution(int dim) const;

    std::string describe(const std::vector<std::string>& names) const;
};

struct NormalizationResult {
    std::vector<int> permutation;    // permutation[new_pos] = original param index
    int r = 0;
    std::optional<int> m;            // nullopt: vanishing up to m_cap (reported as "maxed out")
    int m_cap = 0;
    int s = 0;
    std::vector<ShearTransform> transforms;
    std::vector<Jet<Rat>> f_jets_final;   // one per support outcome, final coordinates
    std::vector<Jet<Rat>> p_jets_final;   // transformed probability jets (same order)
    std::vector<RandomVariable> v1_basis; // ∂f/∂θ_k|_0 for k < r, final coordinates
    std::vector<RandomVariable> wm_basis; // B_1..B_s
    std::vector<MultiIndex> wm_monomials; // the defining multi-index of each B_j
    TrueDistribution q;
    std::vector<std::string> support_labels;
    std::vector<std::string> param_names;   // permuted order

    bool maxed_out() const { return !m.has_value(); }
    int dim() const { return static_cast<int>(permutation.size()); }
    std::vector<int> degenerate_positions() const;
};

// Derivative random variable ∂^α f|_0 read off a family of support-aligned jets.
RandomVariable derivative_rv(const std::vector<Jet<Rat>>& jets, const MultiIndex& alpha);

// §"step (i)": Fisher rank r and the permutation putting a greedy
// lowest-index maximal independent set of first-derivative rvs first.
// Throws NotSemiRegular when r = 0.
std::pair<std::vector<int>, int> select_independent_params(const ModelSpec& spec, int cap);

// One elimination pass over all degree-n monomials in the degenerate
// coordinates. Mutates the jets/transform list in `state`; returns the
// independent (retained) elements found at this order, which is empty exactly
// when W_n was reduced to {0}.
struct EliminationState {
    int r;
    std::vector<Jet<Rat>> f_jets;
    std::vector<Jet<Rat>> p_jets;
    std::vector<RandomVariable> v1_basis;
    std::vector<ShearTransform> transforms;
    std::vector<RandomVariable> retained;
    std::vector<MultiIndex> retained_monomials;
    TrueDistribution q;
    int cap;
};

void eliminate_order(EliminationState& state, int n);

NormalizationResult normalize_model(const ModelSpec& spec, int m_cap = 6,
                                    std::optional<int> cap_override = {});

// F_m(X|t) written as Σ_j P_j(t)·B_j(X) with P_j homogeneous of degree m in
// the d−r degenerate directions, exact.
struct FmDecomposition {
    int m = 0;
    int dr = 0;                           // number of degenerate directions
    std::vector<Polynomial<Rat>> polys;   // P_j, in dr variables
    std::vector<RandomVariable> basis;    // B_j
};

FmDecomposition fm_decomposition(const NormalizationResult& res);

// true iff F_m(·|t) = 0 a.s., i.e. every P_j(t) = 0
bool fm_vanishes_at(const FmDecomposition& fm, const std::vector<Rat>& direction);

struct Assumption3Config {
    int samples = 1024;
    int gradient_steps = 50;
    double tol = 1e-8;
    unsigned long long seed = 0x5eed;
};

struct AllDirectionsII {};
struct DirectionIFound {
    std::vector<Rat> direction;  // nonzero, F_m(·|direction) certified a.s. zero
};
struct NumericallyVerifiedII {
    double min_value = 0;
    int samples = 0;
};
struct Inconclusive {
    std::string reason;
};
using Assumption3Status =
    std::variant<AllDirectionsII, DirectionIFound, NumericallyVerifiedII, Inconclusive>;

Assumption3Status check_assumption3(const NormalizationResult& res,
                                    const Assumption3Config& config = {});

std::string describe(const Assumption3Status& status);

}  // namespace rlct
