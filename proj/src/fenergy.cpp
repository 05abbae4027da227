#include "rlct/fenergy.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace rlct {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(seed ^ (stream << 32)) ^ index);
}

}  // namespace

FreeEnergyEvaluator::FreeEnergyEvaluator(const ModelSpec& spec, const FEnergyConfig& config)
    : d_(spec.d()), n_outcomes_(spec.n_outcomes()) {
    if (d_ > 3)
        throw Error(Error::Kind::DimensionTooHigh,
                    "grid quadrature is limited to d <= 3 parameters");
    const int g = config.grid_points_per_dim;
    grid_size_ = 1;
    for (int i = 0; i < d_; ++i) grid_size_ *= static_cast<std::size_t>(g);

    TrueDistribution q = spec.true_distribution();
    for (int x = 0; x < n_outcomes_; ++x)
        log_q_.push_back(q.weights[x] > 0 ? std::log(to_double(q.weights[x]))
                                          : -std::numeric_limits<double>::infinity());

    // clip the box until every grid probability is positive
    double half = to_double(config.box_half);
    std::vector<double> center(d_);
    for (int i = 0; i < d_; ++i) center[i] = to_double(spec.theta_star[i]);

    for (int attempt = 0;; ++attempt) {
        if (attempt > 12)
            throw Error(Error::Kind::GridUnderflow,
                        "no box around theta_star keeps all probabilities positive");
        log_table_.assign(grid_size_ * n_outcomes_, 0.0);
        bool ok = true;
        std::vector<double> theta(d_);
        for (std::size_t point = 0; point < grid_size_ && ok; ++point) {
            std::size_t rest = point;
            for (int i = 0; i < d_; ++i) {
                int slot = static_cast<int>(rest % g);
                rest /= g;
                theta[i] = center[i] - half + 2 * half * (slot + 0.5) / g;
            }
            for (int x = 0; x < n_outcomes_; ++x) {
                double p = evaluate_expr<double>(*spec.prob_exprs[x], theta);
                if (!(p > 0)) {
                    ok = false;
                    break;
                }
                log_table_[point * n_outcomes_ + x] = std::log(p);
            }
        }
        if (ok) break;
        half /= 2;
    }
    box_half_ = half;
}

double FreeEnergyEvaluator::free_energy(const std::vector<int>& outcome_counts) const {
    if (static_cast<int>(outcome_counts.size()) != n_outcomes_)
        throw Error(Error::Kind::SupportMismatch, "counts vector length != outcome count");
    // log-likelihood per grid point, then logsumexp over the uniform box
    double max_ll = -std::numeric_limits<double>::infinity();
    std::vector<double> ll(grid_size_);
    for (std::size_t point = 0; point < grid_size_; ++point) {
        double acc = 0;
        for (int x = 0; x < n_outcomes_; ++x)
            if (outcome_counts[x] > 0)
                acc += outcome_counts[x] * log_table_[point * n_outcomes_ + x];
        ll[point] = acc;
        max_ll = std::max(max_ll, acc);
    }
    if (!std::isfinite(max_ll))
        throw Error(Error::Kind::GridUnderflow, "all grid log-likelihoods are -inf");
    double sum = 0;
    for (std::size_t point = 0; point < grid_size_; ++point)
        sum += std::exp(ll[point] - max_ll);
    return -(max_ll + std::log(sum / static_cast<double>(grid_size_)));
}

double FreeEnergyEvaluator::normalized_free_energy(
    const std::vector<int>& outcome_counts) const {
    double f = free_energy(outcome_counts);
    for (int x = 0; x < n_outcomes_; ++x)
        if (outcome_counts[x] > 0) {
            if (!std::isfinite(log_q_[x]))
                throw Error(Error::Kind::OutcomeOutsideSupport,
                            "dataset contains an outcome with q(x) = 0");
            f += outcome_counts[x] * log_q_[x];
        }
    return f;
}

double free_energy(const ModelSpec& spec, const std::vector<int>& outcome_counts,
                   const FEnergyConfig& config) {
    return FreeEnergyEvaluator(spec, config).free_energy(outcome_counts);
}

FEnergyEstimate estimate_lambda(const ModelSpec& spec, const Rat& theoretical_lambda,
                                const FEnergyConfig& config) {
    FreeEnergyEvaluator evaluator(spec, config);
    TrueDistribution q = spec.true_distribution();
    std::vector<double> cdf;
    double acc = 0;
    for (int x = 0; x < spec.n_outcomes(); ++x) {
        acc += to_double(q.weights[x]);
        cdf.push_back(acc);
    }

    FEnergyEstimate estimate;
    estimate.n_schedule = config.n_schedule;
    estimate.theoretical_lambda = theoretical_lambda;
    estimate.box_half_used = evaluator.box_half();

    for (std::size_t ni = 0; ni < config.n_schedule.size(); ++ni) {
        const int n = config.n_schedule[ni];
        double total = 0;  // ordered summation keeps replicate order deterministic
        for (int rep = 0; rep < config.replicates; ++rep) {
            std::mt19937_64 rng(derive_seed(config.rng_seed, ni, rep));
            std::uniform_real_distribution<double> uniform(0.0, 1.0);
            std::vector<int> counts(spec.n_outcomes(), 0);
            for (int i = 0; i < n; ++i) {
                double u = uniform(rng);
                int x = 0;
                while (x + 1 < spec.n_outcomes() && u > cdf[x]) ++x;
                ++counts[x];
            }
            total += evaluator.normalized_free_energy(counts);
        }
        estimate.per_n_means.push_back(total / config.replicates);
    }

    // ordinary least squares of the means against log n
    const int k = static_cast<int>(config.n_schedule.size());
    double mean_x = 0, mean_y = 0;
    for (int i = 0; i < k; ++i) {
        mean_x += std::log(static_cast<double>(config.n_schedule[i]));
        mean_y += estimate.per_n_means[i];
    }
    mean_x /= k;
    mean_y /= k;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < k; ++i) {
        double dx = std::log(static_cast<double>(config.n_schedule[i])) - mean_x;
        sxx += dx * dx;
        sxy += dx * (estimate.per_n_means[i] - mean_y);
    }
    estimate.lambda_hat = sxy / sxx;
    double rss = 0;
    for (int i = 0; i < k; ++i) {
        double fit = mean_y + estimate.lambda_hat *
                                  (std::log(static_cast<double>(config.n_schedule[i])) - mean_x);
        double resid = estimate.per_n_means[i] - fit;
        rss += resid * resid;
    }
    estimate.std_error = k > 2 ? std::sqrt(rss / (k - 2) / sxx) : 0;
    estimate.pass =
        std::abs(estimate.lambda_hat - to_double(theoretical_lambda)) <= config.tolerance;
    return estimate;
}

}  // namespace rlct
