#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rlct/error.hpp"
#include "rlct/model.hpp"
#include "rlct/rational.hpp"

namespace rlct {

// Small dense matrix, enough for Gram systems at desk scale.
template <typename T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, T fill = T(0))
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n) {
        Matrix out(n, n);
        for (int i = 0; i < n; ++i) out(i, i) = T(1);
        return out;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }
    void swap_rows(int a, int b) {
        for (int j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(int a, int b) {
        for (int i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }

private:
    int rows_, cols_;
    std::vector<T> data_;
};

// A value per support outcome of the true distribution.
struct RandomVariable {
    std::vector<Rat> values;  // aligned with TrueDistribution::support
    std::string label;

    int size() const { return static_cast<int>(values.size()); }
};

struct GramMatrix {
    Matrix<Rat> entries;
    std::vector<std::string> basis_labels;

    int size() const { return entries.rows(); }
};

// Σ_x q(x)·rv(x), exact.
Rat expectation(const RandomVariable& rv, const TrueDistribution& q);

RandomVariable rv_product(const RandomVariable& a, const RandomVariable& b);

// entries[i][j] = E[rv_i · rv_j]
GramMatrix gram(const std::vector<RandomVariable>& rvs, const TrueDistribution& q);

struct RankKernel {
    int rank = 0;
    std::vector<std::vector<Rat>> kernel_basis;  // vectors v with g·v = 0
};

// Exact rank and kernel over the rationals via fraction-free (Bareiss)
// elimination; works for any rectangular matrix.
RankKernel rank_kernel(const Matrix<Rat>& m);
inline RankKernel rank_kernel(const GramMatrix& g) { return rank_kernel(g.entries); }

// Numerical rank fallback for float-mode Gram matrices: pivoted Cholesky with
// tolerance tau relative to the largest diagonal entry. No kernel vectors.
int rank_float(const Matrix<double>& g, double tau = 1e-9);

// Exact determinant (Bareiss).
Rat determinant(const Matrix<Rat>& m);

struct Independent {};
struct Coefficients {
    std::vector<Rat> values;
};
using DependencyResult = std::variant<Independent, Coefficients>;

// If target = Σ a_k·basis_k almost surely, returns the unique coefficients,
// solved through the basis Gram system and then certified pointwise on the
// support; otherwise Independent.
DependencyResult dependency(const RandomVariable& target,
                            const std::vector<RandomVariable>& basis,
                            const TrueDistribution& q);

// true iff rv(x) = 0 for every support outcome
bool is_as_zero(const RandomVariable& rv, const TrueDistribution& q);

// Rank-revealing symmetric congruence analysis of a rational quadratic form.
// Witnesses: `kernel` spans the radical; `positive`/`negative` are vectors u
// with u'Au > 0 / < 0 when such directions exist.
struct QuadraticFormAnalysis {
    enum class Kind {
        Zero,
        PositiveDefinite,
        NegativeDefinite,
        PositiveSemidefinite,
        NegativeSemidefinite,
        Indefinite,
    };
    Kind kind = Kind::Zero;
    int rank = 0;
    std::vector<std::vector<Rat>> kernel;
    std::optional<std::vector<Rat>> positive;
    std::optional<std::vector<Rat>> negative;

    bool definite() const {
        return kind == Kind::PositiveDefinite || kind == Kind::NegativeDefinite;
    }
};

QuadraticFormAnalysis analyze_quadratic_form(const Matrix<Rat>& a);

// Elimination pivots of a symmetric non-negative definite matrix; used by
// property tests (all pivots must be >= 0).
std::vector<Rat> symmetric_pivots(const Matrix<Rat>& a);

}  // namespace rlct
