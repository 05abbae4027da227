#include "rlct/kseries.hpp"

#include <algorithm>

namespace rlct {

Polynomial<Rat> k_taylor(const std::vector<Jet<Rat>>& f_jets, const TrueDistribution& q) {
    if (static_cast<int>(f_jets.size()) != q.support_size())
        throw Error(Error::Kind::SupportMismatch, "f-jet count != support size");
    Polynomial<Rat> out(f_jets.at(0).dim());
    for (int x = 0; x < q.support_size(); ++x)
        out = out + f_jets[x].poly().scaled(q.q(x));
    return out;
}

KExpansion k_taylor(const NormalizationResult& res) {
    KExpansion out;
    out.poly = k_taylor(res.f_jets_final, res.q);
    out.cap = res.f_jets_final.at(0).cap();
    out.r = res.r;
    out.m = res.m;
    // K has an exact minimum 0 at the expansion point
    if (out.poly.coefficient(MultiIndex(out.poly.dim())) != 0)
        throw Error(Error::Kind::Internal, "K expansion has nonzero constant term");
    return out;
}

VanishingReport verify_vanishing(const KExpansion& kexp) {
    VanishingReport report;
    if (!kexp.m) return report;  // nothing to check without a finite order
    const int m = *kexp.m;
    const int d = kexp.poly.dim();
    if (kexp.cap < 2 * m)
        throw Error(Error::Kind::CapExceeded, "vanishing check needs cap >= 2m");
    for (const auto& [alpha, c] : kexp.poly.terms()) {
        int low = alpha.degree_range(0, kexp.r);
        int high = alpha.degree_range(kexp.r, d);
        bool region_a = low == 0 && high <= 2 * m - 1;
        bool region_b = low == 1 && high <= m - 1;
        if (region_a || region_b) {
            report.pass = false;
            report.violations.emplace_back(alpha, c);
        }
    }
    return report;
}

Polynomial<Rat> leading_form(const NormalizationResult& res, const KExpansion& kexp) {
    const int d = res.dim();
    const int m = res.m.value_or(1);
    const int cap = res.f_jets_final.at(0).cap();

    Polynomial<Rat> total(d);
    for (int x = 0; x < res.q.support_size(); ++x) {
        const auto& jet = res.f_jets_final[x];
        // F_1 + F_m for this outcome, as a polynomial in θ
        Polynomial<Rat> fx(d);
        for (int k = 0; k < res.r; ++k) {
            MultiIndex alpha = MultiIndex::unit(d, k);
            fx.add_term(alpha, jet.coefficient(alpha));
        }
        if (res.r < d)
            for (const MultiIndex& kappa :
                 monomials_of_degree(d, m, res.degenerate_positions()))
                fx.add_term(kappa, jet.coefficient(kappa));
        total = total + fx.mul(fx, cap).scaled(res.q.q(x) / 2);
    }

    // the three regions the squared form must reproduce exactly
    for (const auto& poly : {&total, &kexp.poly}) {
        for (const auto& [alpha, c] : poly->terms()) {
            int low = alpha.degree_range(0, res.r);
            int high = alpha.degree_range(res.r, d);
            bool pure_first = low == 2 && high == 0;
            bool cross = low == 1 && high == m && res.r < d;
            bool pure_degenerate = low == 0 && high == 2 * m && res.r < d;
            if (!(pure_first || cross || pure_degenerate)) continue;
            if (total.coefficient(alpha) != kexp.poly.coefficient(alpha))
                throw Error(Error::Kind::MismatchDetected,
                            "leading form disagrees with K at " + to_string(alpha));
        }
    }
    return total;
}

PartitionOracle::PartitionOracle(const std::vector<Jet<Rat>>& p_jets,
                                 const TrueDistribution& q, int order_cap)
    : dim_(p_jets.at(0).dim()), order_cap_(order_cap) {
    if (order_cap > 4)
        throw Error(Error::Kind::OrderTooHigh,
                    "partition enumeration is capped at order 4");
    if (static_cast<int>(p_jets.size()) != q.support_size())
        throw Error(Error::Kind::SupportMismatch, "p-jet count != support size");
    // log p = log q + log(p/q): the constant never enters derivative work, so
    // the unit-constant exact log suffices. Trim caps: the G recurrence takes
    // at most order_cap−1 derivatives of these jets.
    for (int x = 0; x < q.support_size(); ++x) {
        Jet<Rat> scaled = p_jets[x].truncated(order_cap + 1).scaled(Rat(1) / q.q(x));
        logp_jets_.push_back(jet_log(scaled));
    }
    memo_.resize(logp_jets_.size());
}

Rat PartitionOracle::logp_derivative(int support_slot, const MultiIndex& alpha) const {
    return logp_jets_[support_slot].derivative_value(alpha);
}

const Jet<Rat>& PartitionOracle::g_jet(int support_slot, const std::vector<int>& indices) {
    auto& memo = memo_[support_slot];
    auto it = memo.find(indices);
    if (it != memo.end()) return it->second;

    // G_n carries cap(logp) − (n−1): each recurrence step differentiates once.
    const Jet<Rat>& logp = logp_jets_[support_slot];
    Jet<Rat> value(dim_, logp.cap());  // n = 1: G is identically zero
    if (indices.size() >= 2) {
        std::vector<int> prefix(indices.begin(), indices.end() - 1);
        int last = indices.back();
        const Jet<Rat> g_prev = g_jet(support_slot, prefix);  // copy: memo may grow
        const int new_cap = g_prev.cap() - 1;
        Jet<Rat> dlast = logp.derivative(last).truncated(new_cap);
        Jet<Rat> dprefix = logp;
        for (int i : prefix) dprefix = dprefix.derivative(i);  // lands at new_cap
        value = g_prev.truncated(new_cap) * dlast + dprefix * dlast +
                g_prev.derivative(last);
    }
    auto [pos, inserted] = memo.emplace(indices, std::move(value));
    return pos->second;
}

Rat PartitionOracle::g_value(int support_slot, const std::vector<int>& indices) {
    if (static_cast<int>(indices.size()) > order_cap_)
        throw Error(Error::Kind::OrderTooHigh, "G order exceeds the oracle's cap");
    std::vector<int> sorted = indices;
    std::sort(sorted.begin(), sorted.end());
    return g_jet(support_slot, sorted).constant_term();
}

namespace {

// all set partitions of {0..n−1}
void enumerate_partitions(int n, std::vector<std::vector<std::vector<int>>>& out) {
    std::vector<std::vector<int>> blocks;
    auto rec = [&](auto&& self, int element) -> void {
        if (element == n) {
            out.push_back(blocks);
            return;
        }
        for (auto& block : blocks) {
            block.push_back(element);
            self(self, element + 1);
            block.pop_back();
        }
        blocks.push_back({element});
        self(self, element + 1);
        blocks.pop_back();
    };
    rec(rec, 0);
}

}  // namespace

Rat PartitionOracle::g_value_enumerated(int support_slot,
                                        const std::vector<int>& indices) const {
    const int n = static_cast<int>(indices.size());
    if (n > order_cap_)
        throw Error(Error::Kind::OrderTooHigh, "G order exceeds the oracle's cap");
    std::vector<std::vector<std::vector<int>>> partitions;
    enumerate_partitions(n, partitions);
    Rat out = 0;
    for (const auto& partition : partitions) {
        if (partition.size() < 2) continue;  // blocks must be proper subsets
        Rat product = 1;
        for (const auto& block : partition) {
            MultiIndex alpha(dim_);
            for (int pos : block) alpha.e[indices[pos]] += 1;
            product *= logp_derivative(support_slot, alpha);
        }
        out += product;
    }
    return out;
}

namespace {

std::vector<int> expand_multi_index(const MultiIndex& alpha) {
    std::vector<int> out;
    for (int i = 0; i < alpha.dim(); ++i)
        for (int k = 0; k < alpha.e[i]; ++k) out.push_back(i);
    return out;
}

std::vector<MultiIndex> indices_up_to_order(int dim, int max_order) {
    std::vector<int> all(dim);
    for (int i = 0; i < dim; ++i) all[i] = i;
    std::vector<MultiIndex> out;
    for (int n = 1; n <= max_order; ++n) {
        auto level = monomials_of_degree(dim, n, all);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

void record_failure(IdentityReport& report, const std::string& what) {
    if (report.pass) report.first_failure = what;
    report.pass = false;
}

}  // namespace

IdentityReport verify_prop1(const ModelSpec& spec, int order_cap) {
    if (order_cap > 4)
        throw Error(Error::Kind::OrderTooHigh, "verify_prop1 is capped at order 4");
    IdentityReport report;
    const int d = spec.d();
    const int cap = order_cap + 1;
    TrueDistribution q = spec.true_distribution();

    std::vector<Jet<Rat>> p_jets, f_jets;
    for (int x : q.support) {
        p_jets.push_back(evaluate_prob_jet(spec, x, cap));
        f_jets.push_back(f_jet(spec, x, cap));
    }
    PartitionOracle oracle(p_jets, q, order_cap);

    for (const MultiIndex& alpha : indices_up_to_order(d, order_cap)) {
        std::vector<int> indices = expand_multi_index(alpha);
        Rat expectation_term = 0;
        for (int x = 0; x < q.support_size(); ++x) {
            Rat df = f_jets[x].derivative_value(alpha);
            Rat dp_over_p = p_jets[x].derivative_value(alpha) / q.q(x);
            Rat g_rec = oracle.g_value(x, indices);
            Rat g_enum = oracle.g_value_enumerated(x, indices);
            ++report.checks;
            if (g_rec != g_enum)
                record_failure(report, "G recurrence != enumeration at " + to_string(alpha));
            if (df != -dp_over_p + g_rec)
                record_failure(report, "f-derivative identity fails at " + to_string(alpha));
            expectation_term += q.q(x) * dp_over_p;
        }
        ++report.checks;
        if (expectation_term != 0)
            record_failure(report, "E[d^n p / p] != 0 at " + to_string(alpha));
    }
    return report;
}

IdentityReport verify_prop_taylor(const NormalizationResult& res) {
    if (!res.m)
        throw Error(Error::Kind::OrderTooHigh, "prop-taylor needs a finite vanishing order");
    const int m = *res.m;
    if (2 * m > 4)
        throw Error(Error::Kind::OrderTooHigh, "prop-taylor is limited to m <= 2");
    IdentityReport report;
    const int d = res.dim();
    std::vector<int> degenerate = res.degenerate_positions();
    if (degenerate.empty()) return report;  // vacuous for regular models

    PartitionOracle oracle(res.p_jets_final, res.q, 2 * m);

    // (1) pure degenerate G of order ≤ 2m−1 vanish a.s.
    for (int n = 1; n <= 2 * m - 1; ++n) {
        for (const MultiIndex& alpha : monomials_of_degree(d, n, degenerate)) {
            std::vector<int> indices = expand_multi_index(alpha);
            for (int x = 0; x < res.q.support_size(); ++x) {
                ++report.checks;
                if (oracle.g_value(x, indices) != 0)
                    record_failure(report, "G != 0 at " + to_string(alpha));
            }
        }
    }
    // (2) θ_j × degenerate order ≤ m−1 vanish a.s.
    for (int j = 0; j < res.r; ++j) {
        for (int n = 0; n <= m - 1; ++n) {
            for (const MultiIndex& beta : monomials_of_degree(d, n, degenerate)) {
                MultiIndex alpha = beta;
                alpha.e[j] += 1;
                if (alpha.total_degree() < 2) continue;  // G of order 1 is trivially 0
                std::vector<int> indices = expand_multi_index(alpha);
                for (int x = 0; x < res.q.support_size(); ++x) {
                    ++report.checks;
                    if (oracle.g_value(x, indices) != 0)
                        record_failure(report, "G != 0 at " + to_string(alpha));
                }
            }
        }
    }
    // (3) θ_j × degenerate order m: product of first and m-th f-derivatives
    for (int j = 0; j < res.r; ++j) {
        for (const MultiIndex& beta : monomials_of_degree(d, m, degenerate)) {
            MultiIndex alpha = beta;
            alpha.e[j] += 1;
            std::vector<int> indices = expand_multi_index(alpha);
            for (int x = 0; x < res.q.support_size(); ++x) {
                Rat lhs = oracle.g_value(x, indices);
                Rat rhs = res.f_jets_final[x].derivative_value(MultiIndex::unit(d, j)) *
                          res.f_jets_final[x].derivative_value(beta);
                ++report.checks;
                if (lhs != rhs)
                    record_failure(report, "product form fails at " + to_string(alpha));
            }
        }
    }
    // (4) pure degenerate order 2m: the binomial-sum form
    for (const MultiIndex& alpha : monomials_of_degree(d, 2 * m, degenerate)) {
        std::vector<int> indices = expand_multi_index(alpha);
        for (int x = 0; x < res.q.support_size(); ++x) {
            Rat rhs = 0;
            for (const MultiIndex& gamma : monomials_of_degree(d, m, degenerate)) {
                bool fits = true;
                Rat binom_product = 1;
                MultiIndex rest(d);
                for (int p : degenerate) {
                    if (gamma.e[p] > alpha.e[p]) {
                        fits = false;
                        break;
                    }
                    rest.e[p] = alpha.e[p] - gamma.e[p];
                    binom_product *= Rat(binomial(alpha.e[p], gamma.e[p]));
                }
                if (!fits) continue;
                rhs += binom_product * res.f_jets_final[x].derivative_value(gamma) *
                       res.f_jets_final[x].derivative_value(rest);
            }
            rhs /= 2;
            ++report.checks;
            if (oracle.g_value(x, indices) != rhs)
                record_failure(report, "binomial-sum form fails at " + to_string(alpha));
        }
    }
    return report;
}

}  // namespace rlct
