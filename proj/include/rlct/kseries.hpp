#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rlct/normalize.hpp"

namespace rlct {

struct KExpansion {
    Polynomial<Rat> poly;  // Taylor expansion of K in final coordinates
    int cap = 0;
    int r = 0;
    std::optional<int> m;
};

// K(θ) = E_X[f(X|θ)]: coefficients are the q-weighted sums of f-jet
// coefficients, exact.
KExpansion k_taylor(const NormalizationResult& res);
Polynomial<Rat> k_taylor(const std::vector<Jet<Rat>>& f_jets, const TrueDistribution& q);

struct VanishingReport {
    bool pass = true;
    std::vector<std::pair<MultiIndex, Rat>> violations;
};

// The zero regions of the K expansion: (a) pure degenerate degree ≤ 2m−1,
// (b) first order in θ_{1..r} × degenerate degree ≤ m−1.
VanishingReport verify_vanishing(const KExpansion& kexp);

// ½·E[(F_1+F_m)²]; throws MismatchDetected if it disagrees with the K
// expansion on the three regions it determines.
Polynomial<Rat> leading_form(const NormalizationResult& res, const KExpansion& kexp);

// Derivative data of log p for one support outcome, exposed as jets so the
// G recurrence can differentiate.
class PartitionOracle {
public:
    // order_cap: highest derivative order that will be requested (≤ 4 keeps
    // the partition-enumeration cross-check affordable: Bell(4) = 15).
    PartitionOracle(const std::vector<Jet<Rat>>& p_jets, const TrueDistribution& q,
                    int order_cap);

    int order_cap() const { return order_cap_; }
    int dim() const { return dim_; }
    int outcomes() const { return static_cast<int>(logp_jets_.size()); }

    // G_{θ_{i₁}…θ_{i_n}}(x, 0) by the recurrence (indices 0-based, any order).
    Rat g_value(int support_slot, const std::vector<int>& indices);

    // Independent route: direct sum over set partitions (every block a proper
    // nonempty subset).
    Rat g_value_enumerated(int support_slot, const std::vector<int>& indices) const;

    // ∂^α log p(x|·)|_0
    Rat logp_derivative(int support_slot, const MultiIndex& alpha) const;

private:
    const Jet<Rat>& g_jet(int support_slot, const std::vector<int>& sorted_indices);

    int dim_;
    int order_cap_;
    std::vector<Jet<Rat>> logp_jets_;
    std::vector<std::map<std::vector<int>, Jet<Rat>>> memo_;
};

struct IdentityReport {
    bool pass = true;
    int checks = 0;
    std::string first_failure;
};

// Faà-di-Bruno identity ∂ⁿf = −(∂ⁿp)/p + G at θ*, recurrence-vs-enumeration
// agreement, and E[∂ⁿp/p] = 0, for all multi-indices up to order_cap.
IdentityReport verify_prop1(const ModelSpec& spec, int order_cap = 4);

// The G-vanishing/product/binomial-sum facts behind the main expansion, in
// final coordinates. OrderTooHigh for m > 2 (needs G up to order 2m ≤ 4).
IdentityReport verify_prop_taylor(const NormalizationResult& res);

}  // namespace rlct
