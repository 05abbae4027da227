#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rlct/model.hpp"

namespace rlct {

// The only non-exact module: empirical free energy over a uniform box prior
// with midpoint tensor-grid quadrature, all in double precision.
struct FEnergyConfig {
    Rat box_half = Rat(1, 4);   // prior box half-width, clipped to keep p > 0
    int grid_points_per_dim = 64;
    std::vector<int> n_schedule = {50, 87, 152, 264, 460, 800};
    int replicates = 200;
    std::uint64_t rng_seed = 1;
    double tolerance = 0.15;
};

struct FEnergyEstimate {
    double lambda_hat = 0;
    double std_error = 0;
    std::vector<double> per_n_means;
    std::vector<int> n_schedule;
    Rat theoretical_lambda;
    bool pass = false;
    double box_half_used = 0;
};

// Precomputes the log-likelihood table on the quadrature grid once; datasets
// are multisets of outcomes given as per-outcome counts.
class FreeEnergyEvaluator {
public:
    FreeEnergyEvaluator(const ModelSpec& spec, const FEnergyConfig& config);

    // F_n = −log ∫ φ(θ) Π p(X_i|θ) dθ for the uniform box prior, computed in
    // log space with max-subtraction.
    double free_energy(const std::vector<int>& outcome_counts) const;

    // normalized: F_n + Σ_i log q(X_i)
    double normalized_free_energy(const std::vector<int>& outcome_counts) const;

    double box_half() const { return box_half_; }
    const std::vector<double>& log_q() const { return log_q_; }

private:
    int d_;
    int n_outcomes_;
    double box_half_;
    std::vector<double> log_table_;  // grid-major: [point][outcome]
    std::size_t grid_size_;
    std::vector<double> log_q_;
};

double free_energy(const ModelSpec& spec, const std::vector<int>& outcome_counts,
                   const FEnergyConfig& config);

// Draws `replicates` datasets from q per schedule entry (deterministic per
// seed), averages the normalized free energy and fits its slope against
// log n by ordinary least squares.
FEnergyEstimate estimate_lambda(const ModelSpec& spec, const Rat& theoretical_lambda,
                                const FEnergyConfig& config);

}  // namespace rlct
