#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rlct/kseries.hpp"
#include "rlct/normalize.hpp"

namespace rlct {

// One local coordinate chart of the composed blow-up sequence. The first
// stage is centered at the origin; every later stage is centered at
// {θ_1 = … = θ_r = θ_i = 0} where i is the chain's degenerate index.
struct BlowupChart {
    std::vector<int> path;                        // exceptional index per stage (0-based)
    std::vector<Polynomial<Rat>> substitution;    // θ_j as a monomial in chart coords
    MultiIndex jacobian_exponents;                // h
    bool terminal = false;                        // deepest chart of its branch
    int exceptional_var = 0;                      // last entry of path

    std::string id(const std::vector<std::string>& names) const;
};

enum class ChartStages { All, Final };

std::vector<BlowupChart> build_charts(int d, int r, int m,
                                      ChartStages stages = ChartStages::All);

struct PullBack {
    MultiIndex k;               // exponent of the factored monomial
    Polynomial<Rat> unit_factor;
};

// Substitute, then factor out the largest common monomial; the identity
// monomial(k)·unit = K∘chart holds exactly.
PullBack pull_back(const Polynomial<Rat>& k_poly, const BlowupChart& chart);

struct UnitCheck {
    bool pass = true;
    std::vector<std::vector<Rat>> failures;        // grid points where unit ≤ 0
    std::vector<std::vector<Rat>> excluded_s;      // grid points excluded as S
};

// Evaluates the unit factor on a deterministic grid on the exceptional
// surface (coordinates in {−1/4, 0, 1/4}), excluding points of S. A grid
// pass is evidence; the proof-level guarantee is the positivity lemma under
// Assumption 3(ii).
UnitCheck unit_check(const Polynomial<Rat>& unit_factor, const BlowupChart& chart,
                     const NormalizationResult& res, const FmDecomposition& fm);

struct ChartRow {
    BlowupChart chart;
    MultiIndex k;
    MultiIndex h;
    Polynomial<Rat> unit_factor;
    Rat chart_lambda;       // min over i of (h_i+1)/k_i, k_i > 0
    int multiplicity = 0;   // count of minimizing indices
    bool unit_pass = false;
    bool touches_s = false;
};

struct ChartTable {
    std::vector<ChartRow> rows;
    Rat lambda;
    int multiplicity = 0;
    std::string exceptional_set;  // description of S (empty when S = ∅)
    bool upper_bound_only = false;
};

ChartTable chart_table(const Polynomial<Rat>& k_poly, const NormalizationResult& res,
                       const FmDecomposition& fm);

}  // namespace rlct
