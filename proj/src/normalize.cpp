#include "rlct/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace rlct {

std::vector<Polynomial<Rat>> ShearTransform::substitution(int dim) const {
    std::vector<Polynomial<Rat>> images;
    images.reserve(dim);
    for (int i = 0; i < dim; ++i) images.push_back(Polynomial<Rat>::variable(dim, i));
    Polynomial<Rat> mono(dim);
    mono.add_term(monomial, normalizer);
    for (std::size_t t = 0; t < targets.size(); ++t)
        images[targets[t]] = images[targets[t]] - mono.scaled(coefficients[t]);
    return images;
}

std::string ShearTransform::describe(const std::vector<std::string>& names) const {
    std::ostringstream os;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        if (t) os << ", ";
        const std::string& var = names[targets[t]];
        Polynomial<Rat> mono(monomial.dim());
        mono.add_term(monomial, coefficients[t] * normalizer);
        os << var << "' = " << var << " + " << mono.str(names);
    }
    return os.str();
}

std::vector<int> NormalizationResult::degenerate_positions() const {
    std::vector<int> out;
    for (int i = r; i < dim(); ++i) out.push_back(i);
    return out;
}

RandomVariable derivative_rv(const std::vector<Jet<Rat>>& jets, const MultiIndex& alpha) {
    RandomVariable rv;
    rv.label = "d^" + std::to_string(alpha.total_degree()) + "f/d" + to_string(alpha);
    rv.values.reserve(jets.size());
    for (const auto& jet : jets) rv.values.push_back(jet.derivative_value(alpha));
    return rv;
}

namespace {

std::vector<Jet<Rat>> support_f_jets(const ModelSpec& spec, const TrueDistribution& q, int cap) {
    std::vector<Jet<Rat>> jets;
    jets.reserve(q.support.size());
    for (int x : q.support) jets.push_back(f_jet(spec, x, cap));
    return jets;
}

// variable reordering: new coordinate `pos` is old coordinate perm[pos]
std::vector<Jet<Rat>> permute_jets(const std::vector<Jet<Rat>>& jets,
                                   const std::vector<int>& perm) {
    const int dim = static_cast<int>(perm.size());
    std::vector<Polynomial<Rat>> images(dim, Polynomial<Rat>(dim));
    for (int pos = 0; pos < dim; ++pos)
        images[perm[pos]] = Polynomial<Rat>::variable(dim, pos);
    std::vector<Jet<Rat>> out;
    out.reserve(jets.size());
    for (const auto& jet : jets) out.push_back(jet.substitute(images));
    return out;
}

}  // namespace

std::pair<std::vector<int>, int> select_independent_params(const ModelSpec& spec, int cap) {
    TrueDistribution q = spec.true_distribution();
    std::vector<Jet<Rat>> jets = support_f_jets(spec, q, cap);
    const int d = spec.d();

    std::vector<RandomVariable> first_derivs;
    for (int i = 0; i < d; ++i)
        first_derivs.push_back(derivative_rv(jets, MultiIndex::unit(d, i)));

    int r = rank_kernel(gram(first_derivs, q)).rank;
    if (r == 0)
        throw Error(Error::Kind::NotSemiRegular,
                    "Fisher information rank is 0 at theta_star (not semi-regular)");

    // greedy lowest-index maximal independent subset
    std::vector<int> chosen;
    std::vector<RandomVariable> chosen_rvs;
    for (int i = 0; i < d && static_cast<int>(chosen.size()) < r; ++i) {
        std::vector<RandomVariable> trial = chosen_rvs;
        trial.push_back(first_derivs[i]);
        if (rank_kernel(gram(trial, q)).rank == static_cast<int>(trial.size())) {
            chosen.push_back(i);
            chosen_rvs = std::move(trial);
        }
    }
    std::vector<int> perm = chosen;
    for (int i = 0; i < d; ++i)
        if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) perm.push_back(i);
    return {perm, r};
}

void eliminate_order(EliminationState& state, int n) {
    const int dim = state.f_jets.at(0).dim();
    if (n > state.cap)
        throw Error(Error::Kind::CapExceeded, "elimination order exceeds jet cap");
    std::vector<int> degenerate;
    for (int i = state.r; i < dim; ++i) degenerate.push_back(i);

    for (const MultiIndex& kappa : monomials_of_degree(dim, n, degenerate)) {
        RandomVariable rv = derivative_rv(state.f_jets, kappa);
        if (is_as_zero(rv, state.q)) continue;

        std::vector<RandomVariable> basis = state.v1_basis;
        basis.insert(basis.end(), state.retained.begin(), state.retained.end());
        DependencyResult dep = dependency(rv, basis, state.q);
        if (std::holds_alternative<Independent>(dep)) {
            rv.label = "B" + std::to_string(state.retained.size() + 1);
            state.retained.push_back(rv);
            state.retained_monomials.push_back(kappa);
            continue;
        }

        const auto& coeffs = std::get<Coefficients>(dep).values;
        ShearTransform shear;
        shear.monomial = kappa;
        shear.normalizer = Rat(1) / Rat(kappa.factorial_product());
        for (int k = 0; k < state.r; ++k) {
            if (coeffs[k] == 0) continue;
            shear.targets.push_back(k);
            shear.coefficients.push_back(coeffs[k]);
        }
        std::vector<Rat> residual_coeffs(coeffs.begin() + state.r, coeffs.end());

        if (!shear.targets.empty()) {
            auto images = shear.substitution(dim);
            for (auto& jet : state.f_jets) jet = jet.substitute(images);
            for (auto& jet : state.p_jets) jet = jet.substitute(images);
            state.transforms.push_back(shear);
        }

        // certificate: in the new coordinates the derivative must equal the
        // retained-basis residual Σ b_j B_j exactly on the support
        RandomVariable after = derivative_rv(state.f_jets, kappa);
        for (int x = 0; x < after.size(); ++x) {
            Rat expect = 0;
            for (std::size_t j = 0; j < residual_coeffs.size(); ++j)
                expect += residual_coeffs[j] * state.retained[j].values[x];
            if (after.values[x] != expect)
                throw Error(Error::Kind::Internal,
                            "shear certificate failed at " + to_string(kappa));
        }
    }
}

NormalizationResult normalize_model(const ModelSpec& spec, int m_cap,
                                    std::optional<int> cap_override) {
    const int cap = cap_override.value_or(2 * m_cap + 2);
    auto [perm, r] = select_independent_params(spec, cap);
    const int d = spec.d();

    NormalizationResult res;
    res.permutation = perm;
    res.r = r;
    res.m_cap = m_cap;
    res.q = spec.true_distribution();
    for (int x : res.q.support) res.support_labels.push_back(spec.outcomes[x]);
    for (int pos = 0; pos < d; ++pos) res.param_names.push_back(spec.params[perm[pos]]);

    // support used by random variables is the permuted q; weights are
    // per-outcome so only jets need reindexing
    EliminationState state;
    state.r = r;
    state.q = res.q;
    state.cap = cap;
    state.f_jets = permute_jets(support_f_jets(spec, res.q, cap), perm);
    {
        std::vector<Jet<Rat>> p_jets;
        for (int x : res.q.support) p_jets.push_back(evaluate_prob_jet(spec, x, cap));
        state.p_jets = permute_jets(p_jets, perm);
    }
    for (int k = 0; k < r; ++k)
        state.v1_basis.push_back(derivative_rv(state.f_jets, MultiIndex::unit(d, k)));

    if (r == d) {
        res.m = 1;  // regular case: no degenerate directions
    } else {
        for (int n = 1; n <= m_cap; ++n) {
            eliminate_order(state, n);
            if (!state.retained.empty()) {
                res.m = n;
                // step (iv): repeat passes until no further shear is recorded,
                // then every order-m element lies in span(B_1..B_s)
                std::size_t before = state.transforms.size();
                do {
                    before = state.transforms.size();
                    eliminate_order(state, n);
                } while (state.transforms.size() != before);
                break;
            }
        }
    }

    res.transforms = std::move(state.transforms);
    res.f_jets_final = std::move(state.f_jets);
    res.p_jets_final = std::move(state.p_jets);
    res.v1_basis = std::move(state.v1_basis);
    res.wm_basis = std::move(state.retained);
    res.wm_monomials = std::move(state.retained_monomials);
    res.s = static_cast<int>(res.wm_basis.size());

    // postcondition audit: V1 ∪ {B_j} has full-rank Gram
    std::vector<RandomVariable> all = res.v1_basis;
    all.insert(all.end(), res.wm_basis.begin(), res.wm_basis.end());
    if (rank_kernel(gram(all, res.q)).rank != r + res.s)
        throw Error(Error::Kind::Internal, "V1 + W_m basis is not independent");
    return res;
}

FmDecomposition fm_decomposition(const NormalizationResult& res) {
    FmDecomposition fm;
    if (!res.m || res.s == 0) return fm;
    fm.m = *res.m;
    fm.dr = res.dim() - res.r;
    fm.polys.assign(res.s, Polynomial<Rat>(fm.dr));

    std::vector<int> degenerate = res.degenerate_positions();
    for (const MultiIndex& kappa : monomials_of_degree(res.dim(), fm.m, degenerate)) {
        RandomVariable rv = derivative_rv(res.f_jets_final, kappa);
        // kappa restricted to the degenerate block
        MultiIndex t_index(fm.dr);
        for (int j = 0; j < fm.dr; ++j) t_index.e[j] = kappa.e[res.r + j];
        Rat inv_fact = Rat(1) / Rat(kappa.factorial_product());

        if (is_as_zero(rv, res.q)) continue;
        DependencyResult dep = dependency(rv, res.wm_basis, res.q);
        if (!std::holds_alternative<Coefficients>(dep))
            throw Error(Error::Kind::Internal,
                        "order-m derivative escaped span(B_1..B_s) after normalization");
        const auto& b = std::get<Coefficients>(dep).values;
        for (int j = 0; j < res.s; ++j)
            if (b[j] != 0) fm.polys[j].add_term(t_index, b[j] * inv_fact);
    }
    fm.basis = res.wm_basis;
    return fm;
}

bool fm_vanishes_at(const FmDecomposition& fm, const std::vector<Rat>& direction) {
    for (const auto& poly : fm.polys)
        if (poly.evaluate(direction) != 0) return false;
    return true;
}

namespace {

// s = 1, m = 2: P_1(t) = t'At with A_ij = coefficient/(1 + [i==j])
Matrix<Rat> quadratic_form_matrix(const Polynomial<Rat>& p, int dr) {
    Matrix<Rat> a(dr, dr);
    for (const auto& [alpha, c] : p.terms()) {
        int i = -1, j = -1;
        for (int k = 0; k < dr; ++k) {
            if (alpha.e[k] == 2) i = j = k;
            if (alpha.e[k] == 1) (i < 0 ? i : j) = k;
        }
        if (i == j) a(i, i) = c;
        else {
            a(i, j) = c / 2;
            a(j, i) = c / 2;
        }
    }
    return a;
}

// Round a float vector to small-denominator rationals and certify exactly.
std::optional<std::vector<Rat>> rationalize_direction(const FmDecomposition& fm,
                                                      const std::vector<double>& t) {
    // normalize so the largest coordinate is ±1
    int pivot = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (std::abs(t[i]) > std::abs(t[pivot])) pivot = static_cast<int>(i);
    if (t[pivot] == 0) return std::nullopt;
    for (long den = 1; den <= 64; den *= 2) {
        std::vector<Rat> candidate(t.size());
        bool nonzero = false;
        for (std::size_t i = 0; i < t.size(); ++i) {
            double scaled = t[i] / t[pivot] * static_cast<double>(den);
            long num = std::lround(scaled);
            if (std::abs(scaled - static_cast<double>(num)) > 1e-6 && den < 64) {
                nonzero = false;
                break;
            }
            candidate[i] = Rat(num, den);
            if (num != 0) nonzero = true;
        }
        if (nonzero && fm_vanishes_at(fm, candidate)) return candidate;
    }
    return std::nullopt;
}

}  // namespace

Assumption3Status check_assumption3(const NormalizationResult& res,
                                    const Assumption3Config& config) {
    if (res.maxed_out())
        return Inconclusive{"vanishing order exceeded the search cap"};
    if (*res.m == 1 || res.s == 0) return AllDirectionsII{};  // m=1 convention

    FmDecomposition fm = fm_decomposition(res);

    if (res.s == 1 && *res.m == 2) {
        Matrix<Rat> a = quadratic_form_matrix(fm.polys[0], fm.dr);
        QuadraticFormAnalysis qa = analyze_quadratic_form(a);
        using Kind = QuadraticFormAnalysis::Kind;
        if (qa.definite()) return AllDirectionsII{};
        if (qa.kind == Kind::Zero) {
            std::vector<Rat> e1(fm.dr, Rat(0));
            e1[0] = 1;
            return DirectionIFound{e1};
        }
        if (qa.kind == Kind::PositiveSemidefinite || qa.kind == Kind::NegativeSemidefinite) {
            const auto& v = qa.kernel.front();
            if (fm_vanishes_at(fm, v)) return DirectionIFound{v};
            return Inconclusive{"kernel direction failed the a.s.-zero certificate"};
        }
        // indefinite: look for a rational isotropic direction u + t v with
        // p + 2ct − nt² = 0
        const auto& u = *qa.positive;
        const auto& v = *qa.negative;
        auto form_of = [&](const std::vector<Rat>& x, const std::vector<Rat>& y) {
            Rat out = 0;
            for (int i = 0; i < fm.dr; ++i)
                for (int j = 0; j < fm.dr; ++j) out += x[i] * a(i, j) * y[j];
            return out;
        };
        Rat p = form_of(u, u), nneg = -form_of(v, v), c = form_of(u, v);
        auto disc = exact_sqrt(c * c + p * nneg);
        if (disc) {
            Rat t = (c + *disc) / nneg;
            std::vector<Rat> dir(fm.dr);
            for (int i = 0; i < fm.dr; ++i) dir[i] = u[i] + t * v[i];
            if (fm_vanishes_at(fm, dir)) return DirectionIFound{dir};
        }
        return Inconclusive{"indefinite quadratic form with no rational isotropic direction found"};
    }

    // general fallback: minimize Σ_j P_j(t)² on the unit sphere by multi-start
    // projected gradient, then try to certify any near-zero as exact
    std::vector<Polynomial<double>> polys;
    double scale = 0;
    for (const auto& p : fm.polys) {
        Polynomial<double> pd(fm.dr);
        double max_abs = 0;
        for (const auto& [alpha, cr] : p.terms()) {
            double c = to_double(cr);
            pd.add_term(alpha, c);
            max_abs = std::max(max_abs, std::abs(c));
        }
        polys.push_back(pd);
        scale += max_abs * max_abs;
    }
    auto objective = [&](const std::vector<double>& t) {
        double out = 0;
        for (const auto& p : polys) {
            double v = p.evaluate(t);
            out += v * v;
        }
        return out;
    };
    auto gradient = [&](const std::vector<double>& t) {
        std::vector<double> g(fm.dr, 0.0);
        for (const auto& p : polys) {
            double v = p.evaluate(t);
            for (int i = 0; i < fm.dr; ++i)
                g[i] += 2 * v * p.derivative(i).evaluate(t);
        }
        return g;
    };

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> gauss;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_t;
    for (int sample = 0; sample < config.samples; ++sample) {
        std::vector<double> t(fm.dr);
        double norm = 0;
        for (auto& v : t) {
            v = gauss(rng);
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm == 0) continue;
        for (auto& v : t) v /= norm;
        double step = 0.1;
        double value = objective(t);
        for (int iter = 0; iter < config.gradient_steps; ++iter) {
            std::vector<double> g = gradient(t);
            double dot = 0;
            for (int i = 0; i < fm.dr; ++i) dot += g[i] * t[i];
            std::vector<double> trial(fm.dr);
            double trial_norm = 0;
            for (int i = 0; i < fm.dr; ++i) {
                trial[i] = t[i] - step * (g[i] - dot * t[i]);
                trial_norm += trial[i] * trial[i];
            }
            trial_norm = std::sqrt(trial_norm);
            if (trial_norm == 0) break;
            for (auto& v : trial) v /= trial_norm;
            double trial_value = objective(trial);
            if (trial_value < value) {
                t = trial;
                value = trial_value;
                step *= 1.2;
            } else {
                step *= 0.5;
            }
        }
        if (value < best) {
            best = value;
            best_t = t;
        }
    }

    if (best > config.tol * scale)
        return NumericallyVerifiedII{best, config.samples};
    if (auto dir = rationalize_direction(fm, best_t)) return DirectionIFound{*dir};
    return Inconclusive{"numeric minimum near zero but no exact certificate found"};
}

std::string describe(const Assumption3Status& status) {
    if (std::holds_alternative<AllDirectionsII>(status))
        return "all nonzero directions satisfy condition (ii): exact";
    if (const auto* d = std::get_if<DirectionIFound>(&status)) {
        std::string out = "direction with F_m = 0 a.s. found: (";
        for (std::size_t i = 0; i < d->direction.size(); ++i) {
            if (i) out += ", ";
            out += to_string(d->direction[i]);
        }
        return out + ")";
    }
    if (const auto* nv = std::get_if<NumericallyVerifiedII>(&status)) {
        std::ostringstream os;
        os << "condition (ii) verified numerically (min " << nv->min_value << " over "
           << nv->samples << " starts)";
        return os.str();
    }
    return "inconclusive: " + std::get<Inconclusive>(status).reason;
}

}  // namespace rlct
