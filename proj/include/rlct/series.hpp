#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rlct/error.hpp"
#include "rlct/multi_index.hpp"

namespace rlct {

namespace detail {

template <typename T>
bool scalar_is_zero(const T& x) {
    return x == T(0);
}

}  // namespace detail

// Sparse multivariate polynomial over a scalar field T. Zero coefficients are
// never stored. No truncation contract; `Jet` below adds one.
template <typename T>
class Polynomial {
public:
    using TermMap = std::map<MultiIndex, T, GradedLexLess>;

    Polynomial() : dim_(0) {}
    explicit Polynomial(int dim) : dim_(dim) {}

    static Polynomial constant(int dim, const T& value) {
        Polynomial out(dim);
        out.add_term(MultiIndex(dim), value);
        return out;
    }

    static Polynomial variable(int dim, int index) {
        if (index < 0 || index >= dim)
            throw Error(Error::Kind::IndexOutOfRange, "variable index out of range");
        Polynomial out(dim);
        out.add_term(MultiIndex::unit(dim, index), T(1));
        return out;
    }

    int dim() const { return dim_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const {
        return terms_.empty() ? -1 : terms_.rbegin()->first.total_degree();
    }

    T coefficient(const MultiIndex& alpha) const {
        if (alpha.dim() != dim_)
            throw Error(Error::Kind::DimensionMismatch, "multi-index length != dim");
        auto it = terms_.find(alpha);
        return it == terms_.end() ? T(0) : it->second;
    }

    T constant_term() const { return coefficient(MultiIndex(dim_)); }

    void add_term(const MultiIndex& alpha, const T& value) {
        if (detail::scalar_is_zero(value)) return;
        auto [it, inserted] = terms_.emplace(alpha, value);
        if (!inserted) {
            it->second += value;
            if (detail::scalar_is_zero(it->second)) terms_.erase(it);
        }
    }

    Polynomial operator-() const {
        Polynomial out(dim_);
        for (const auto& [alpha, c] : terms_) out.terms_.emplace(alpha, -c);
        return out;
    }

    Polynomial operator+(const Polynomial& other) const {
        check_same_dim(other);
        Polynomial out(*this);
        for (const auto& [alpha, c] : other.terms_) out.add_term(alpha, c);
        return out;
    }

    Polynomial operator-(const Polynomial& other) const { return *this + (-other); }

    // Cauchy product; terms of total degree > max_degree are dropped when
    // max_degree is given.
    Polynomial mul(const Polynomial& other, std::optional<int> max_degree = {}) const {
        check_same_dim(other);
        Polynomial out(dim_);
        for (const auto& [a, ca] : terms_) {
            int da = a.total_degree();
            if (max_degree && da > *max_degree) break;  // graded order: all later terms too big
            for (const auto& [b, cb] : other.terms_) {
                if (max_degree && da + b.total_degree() > *max_degree) continue;
                out.add_term(a + b, ca * cb);
            }
        }
        return out;
    }

    Polynomial operator*(const Polynomial& other) const { return mul(other); }

    Polynomial scaled(const T& factor) const {
        Polynomial out(dim_);
        if (detail::scalar_is_zero(factor)) return out;
        for (const auto& [alpha, c] : terms_) out.terms_.emplace(alpha, c * factor);
        return out;
    }

    Polynomial pow(int exponent, std::optional<int> max_degree = {}) const {
        if (exponent < 0)
            throw Error(Error::Kind::IndexOutOfRange, "negative integer power");
        Polynomial out = constant(dim_, T(1));
        for (int k = 0; k < exponent; ++k) out = out.mul(*this, max_degree);
        return out;
    }

    Polynomial truncated(int max_degree) const {
        Polynomial out(dim_);
        for (const auto& [alpha, c] : terms_) {
            if (alpha.total_degree() > max_degree) break;
            out.terms_.emplace(alpha, c);
        }
        return out;
    }

    // Polynomial composition: replaces variable i by images[i]. Every image
    // must have the same dim and no constant term, so composition cannot pull
    // high-degree information below the truncation threshold.
    Polynomial substitute(const std::vector<Polynomial>& images,
                          std::optional<int> max_degree = {}) const {
        if (static_cast<int>(images.size()) != dim_)
            throw Error(Error::Kind::DimensionMismatch, "substitution map length != dim");
        for (const auto& img : images) {
            if (img.dim() != dim_)
                throw Error(Error::Kind::DimensionMismatch, "substitution image dim mismatch");
            if (!detail::scalar_is_zero(img.constant_term()))
                throw Error(Error::Kind::DimensionMismatch,
                            "substitution image must have degree >= 1");
        }
        // power cache per variable
        std::vector<std::vector<Polynomial>> powers(dim_);
        auto power_of = [&](int var, int exp) -> const Polynomial& {
            auto& cache = powers[var];
            if (cache.empty()) cache.push_back(constant(dim_, T(1)));
            while (static_cast<int>(cache.size()) <= exp)
                cache.push_back(cache.back().mul(images[var], max_degree));
            return cache[exp];
        };
        Polynomial out(dim_);
        for (const auto& [alpha, c] : terms_) {
            if (max_degree && alpha.total_degree() > *max_degree) break;
            Polynomial term = constant(dim_, c);
            for (int i = 0; i < dim_; ++i)
                if (alpha.e[i] > 0) term = term.mul(power_of(i, alpha.e[i]), max_degree);
            out = out + term;
        }
        return out;
    }

    // ∂/∂(variable index)
    Polynomial derivative(int index) const {
        if (index < 0 || index >= dim_)
            throw Error(Error::Kind::IndexOutOfRange, "derivative index out of range");
        Polynomial out(dim_);
        for (const auto& [alpha, c] : terms_) {
            if (alpha.e[index] == 0) continue;
            MultiIndex beta = alpha;
            beta.e[index] -= 1;
            out.add_term(beta, c * T(alpha.e[index]));
        }
        return out;
    }

    T evaluate(const std::vector<T>& point) const {
        if (static_cast<int>(point.size()) != dim_)
            throw Error(Error::Kind::DimensionMismatch, "evaluation point dim mismatch");
        T out(0);
        for (const auto& [alpha, c] : terms_) {
            T term = c;
            for (int i = 0; i < dim_; ++i)
                for (int k = 0; k < alpha.e[i]; ++k) term *= point[i];
            out += term;
        }
        return out;
    }

    bool operator==(const Polynomial& other) const {
        return dim_ == other.dim_ && terms_ == other.terms_;
    }

    std::string str(const std::vector<std::string>& names = {}) const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [alpha, c] : terms_) {
            std::ostringstream coeff;
            coeff << c;
            std::string cs = coeff.str();
            if (!first) os << (cs[0] == '-' ? " - " : " + ");
            else if (cs[0] == '-') os << "-";
            if (cs[0] == '-') cs = cs.substr(1);
            bool has_vars = alpha.total_degree() > 0;
            if (cs != "1" || !has_vars) os << cs;
            bool star = cs != "1" || !has_vars;
            for (int i = 0; i < dim_; ++i) {
                if (alpha.e[i] == 0) continue;
                if (star) os << "*";
                star = true;
                os << (i < static_cast<int>(names.size()) ? names[i]
                                                          : "u" + std::to_string(i + 1));
                if (alpha.e[i] > 1) os << "^" << alpha.e[i];
            }
            first = false;
        }
        return os.str();
    }

private:
    void check_same_dim(const Polynomial& other) const {
        if (dim_ != other.dim_)
            throw Error(Error::Kind::DimensionMismatch, "polynomial dims differ");
    }

    int dim_;
    TermMap terms_;
};

// Truncated Taylor expansion at a point: coefficient of α is (1/α!)·∂^α of the
// represented function. Closed under ring operations, composition, log.
template <typename T>
class Jet {
public:
    Jet() : cap_(0) {}
    Jet(int dim, int cap) : poly_(dim), cap_(cap) {}
    Jet(Polynomial<T> poly, int cap) : poly_(poly.truncated(cap)), cap_(cap) {}

    // Jet of θ ↦ center_offset + u_index.
    static Jet seed_variable(int index, int dim, int cap, const T& center_offset) {
        if (index < 0 || index >= dim)
            throw Error(Error::Kind::IndexOutOfRange,
                        "seed_variable: index " + std::to_string(index) + " not in [0," +
                            std::to_string(dim) + ")");
        Jet out(dim, cap);
        out.poly_.add_term(MultiIndex(dim), center_offset);
        if (cap >= 1) out.poly_.add_term(MultiIndex::unit(dim, index), T(1));
        return out;
    }

    static Jet constant(int dim, int cap, const T& value) {
        return Jet(Polynomial<T>::constant(dim, value), cap);
    }

    int dim() const { return poly_.dim(); }
    int cap() const { return cap_; }
    const Polynomial<T>& poly() const { return poly_; }
    bool is_zero() const { return poly_.is_zero(); }

    T coefficient(const MultiIndex& alpha) const { return poly_.coefficient(alpha); }
    T constant_term() const { return poly_.constant_term(); }

    // α!·coeff(α): the actual partial derivative at the expansion point.
    T derivative_value(const MultiIndex& alpha) const {
        return coefficient(alpha) * T(alpha.factorial_product());
    }

    Jet operator-() const { return Jet(-poly_, cap_); }
    Jet operator+(const Jet& other) const {
        check_compatible(other);
        return Jet(poly_ + other.poly_, cap_);
    }
    Jet operator-(const Jet& other) const {
        check_compatible(other);
        return Jet(poly_ - other.poly_, cap_);
    }
    Jet operator*(const Jet& other) const {
        check_compatible(other);
        return Jet(poly_.mul(other.poly_, cap_), cap_);
    }
    Jet scaled(const T& factor) const { return Jet(poly_.scaled(factor), cap_); }

    Jet pow(int exponent) const {
        if (exponent < 0)
            throw Error(Error::Kind::IndexOutOfRange, "IntPow exponent must be >= 0");
        return Jet(poly_.pow(exponent, cap_), cap_);
    }

    // Series reciprocal: 1/b for b with nonzero constant term.
    Jet reciprocal() const {
        T c = constant_term();
        if (detail::scalar_is_zero(c))
            throw Error(Error::Kind::DivisionByZeroConstantTerm,
                        "division by jet with zero constant term");
        // 1/(c(1+w)) = (1/c)·Σ (−w)^k
        Jet w = scaled(T(1) / c);
        w = w - constant(dim(), cap_, T(1));
        Jet out = constant(dim(), cap_, T(1));
        Jet power = constant(dim(), cap_, T(1));
        for (int k = 1; k <= cap_; ++k) {
            power = power * w;
            if (power.is_zero()) break;
            out = (k % 2 == 1) ? out - power : out + power;
        }
        return out.scaled(T(1) / c);
    }

    Jet operator/(const Jet& other) const {
        check_compatible(other);
        return *this * other.reciprocal();
    }

    Jet truncated(int new_cap) const { return Jet(poly_.truncated(new_cap), new_cap); }

    Jet substitute(const std::vector<Polynomial<T>>& images) const {
        return Jet(poly_.substitute(images, cap_), cap_);
    }

    Jet derivative(int index) const {
        return Jet(poly_.derivative(index), cap_ > 0 ? cap_ - 1 : 0);
    }

    bool operator==(const Jet& other) const {
        return cap_ == other.cap_ && poly_ == other.poly_;
    }

    std::string str(const std::vector<std::string>& names = {}) const {
        return poly_.str(names);
    }

private:
    void check_compatible(const Jet& other) const {
        if (dim() != other.dim() || cap_ != other.cap_)
            throw Error(Error::Kind::DimensionMismatch, "jet dim/cap mismatch");
    }

    Polynomial<T> poly_;
    int cap_;
};

namespace detail {

// log of the constant term; only float mode can carry a transcendental value.
inline double log_constant(double c) { return std::log(c); }
inline Rat log_constant(const Rat& c) {
    if (c != 1)
        throw Error(Error::Kind::ExactLogOfNonUnit,
                    "exact log requires constant term 1, got " + to_string(c));
    return Rat(0);
}

}  // namespace detail

// log∘a via log(c(1+w)) = log c + Σ_{k≥1} (−1)^{k+1} w^k / k. In exact mode
// the constant term must be 1 so log c = 0 stays rational.
template <typename T>
Jet<T> jet_log(const Jet<T>& a) {
    T c = a.constant_term();
    if (c <= T(0))
        throw Error(Error::Kind::NonPositiveConstantTerm,
                    "log of jet with non-positive constant term");
    T logc = detail::log_constant(c);
    Jet<T> w = a.scaled(T(1) / c) - Jet<T>::constant(a.dim(), a.cap(), T(1));
    Jet<T> out = Jet<T>::constant(a.dim(), a.cap(), logc);
    Jet<T> power = Jet<T>::constant(a.dim(), a.cap(), T(1));
    for (int k = 1; k <= a.cap(); ++k) {
        power = power * w;
        if (power.is_zero()) break;
        Jet<T> term = power.scaled(T(1) / T(k));
        out = (k % 2 == 1) ? out + term : out - term;
    }
    return out;
}

}  // namespace rlct
