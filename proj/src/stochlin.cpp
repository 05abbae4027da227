#include "rlct/stochlin.hpp"

#include <cmath>

namespace rlct {

Rat expectation(const RandomVariable& rv, const TrueDistribution& q) {
    if (rv.size() != q.support_size())
        throw Error(Error::Kind::SupportMismatch, "random variable support size mismatch");
    Rat out = 0;
    for (int i = 0; i < rv.size(); ++i) out += q.q(i) * rv.values[i];
    return out;
}

RandomVariable rv_product(const RandomVariable& a, const RandomVariable& b) {
    if (a.size() != b.size())
        throw Error(Error::Kind::SupportMismatch, "random variable support size mismatch");
    RandomVariable out;
    out.label = a.label + "*" + b.label;
    out.values.reserve(a.size());
    for (int i = 0; i < a.size(); ++i) out.values.push_back(a.values[i] * b.values[i]);
    return out;
}

GramMatrix gram(const std::vector<RandomVariable>& rvs, const TrueDistribution& q) {
    if (rvs.empty())
        throw Error(Error::Kind::SupportMismatch, "gram needs at least one random variable");
    const int n = static_cast<int>(rvs.size());
    GramMatrix out;
    out.entries = Matrix<Rat>(n, n);
    for (int i = 0; i < n; ++i) {
        out.basis_labels.push_back(rvs[i].label);
        for (int j = i; j < n; ++j) {
            Rat e = expectation(rv_product(rvs[i], rvs[j]), q);
            out.entries(i, j) = e;
            out.entries(j, i) = e;
        }
    }
    return out;
}

namespace {

// Fraction-free Bareiss elimination to row echelon form. Returns rank and the
// pivot column of each eliminated row.
int bareiss_echelon(Matrix<Rat>& m, std::vector<int>& pivot_cols) {
    const int rows = m.rows(), cols = m.cols();
    int rank = 0;
    Rat prev_pivot = 1;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot_row = -1;
        for (int i = rank; i < rows; ++i) {
            if (m(i, col) != 0) {
                pivot_row = i;
                break;
            }
        }
        if (pivot_row < 0) continue;
        if (pivot_row != rank) m.swap_rows(pivot_row, rank);
        const Rat pivot = m(rank, col);
        for (int i = rank + 1; i < rows; ++i) {
            for (int j = col + 1; j < cols; ++j)
                m(i, j) = (m(i, j) * pivot - m(i, col) * m(rank, j)) / prev_pivot;
            m(i, col) = 0;
        }
        prev_pivot = pivot;
        pivot_cols.push_back(col);
        ++rank;
    }
    return rank;
}

}  // namespace

RankKernel rank_kernel(const Matrix<Rat>& input) {
    Matrix<Rat> m = input;
    std::vector<int> pivot_cols;
    RankKernel out;
    out.rank = bareiss_echelon(m, pivot_cols);

    // back-substitute one kernel vector per free column
    const int cols = input.cols();
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_cols) is_pivot[c] = true;
    for (int free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Rat> v(cols, Rat(0));
        v[free_col] = 1;
        for (int row = out.rank - 1; row >= 0; --row) {
            int pc = pivot_cols[row];
            Rat sum = 0;
            for (int j = pc + 1; j < cols; ++j) sum += m(row, j) * v[j];
            v[pc] = -sum / m(row, pc);
        }
        out.kernel_basis.push_back(std::move(v));
    }
    return out;
}

int rank_float(const Matrix<double>& g, double tau) {
    const int n = g.rows();
    Matrix<double> a = g;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    double max_diag = 0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
    if (max_diag == 0) return 0;
    const double threshold = tau * max_diag;
    int rank = 0;
    for (int k = 0; k < n; ++k) {
        int best = k;
        for (int i = k + 1; i < n; ++i)
            if (a(i, i) > a(best, best)) best = i;
        if (a(best, best) <= threshold) break;
        if (best != k) {
            a.swap_rows(best, k);
            a.swap_cols(best, k);
        }
        double pivot = a(k, k);
        for (int i = k + 1; i < n; ++i) {
            double factor = a(i, k) / pivot;
            for (int j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
            for (int j = 0; j < n; ++j) a(j, i) = a(i, j);  // keep symmetric view
        }
        ++rank;
    }
    return rank;
}

Rat determinant(const Matrix<Rat>& input) {
    if (input.rows() != input.cols())
        throw Error(Error::Kind::InvalidDims, "determinant of non-square matrix");
    const int n = input.rows();
    if (n == 0) return 1;
    Matrix<Rat> m = input;
    Rat prev_pivot = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m(k, k) == 0) {
            int swap = -1;
            for (int i = k + 1; i < n; ++i)
                if (m(i, k) != 0) {
                    swap = i;
                    break;
                }
            if (swap < 0) return 0;
            m.swap_rows(k, swap);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev_pivot;
            m(i, k) = 0;
        }
        prev_pivot = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

DependencyResult dependency(const RandomVariable& target,
                            const std::vector<RandomVariable>& basis,
                            const TrueDistribution& q) {
    const int n = static_cast<int>(basis.size());
    if (n == 0) {
        if (is_as_zero(target, q)) return Coefficients{};
        return Independent{};
    }
    GramMatrix g = gram(basis, q);
    if (rank_kernel(g).rank != n)
        throw Error(Error::Kind::BasisNotIndependent, "dependency basis is not independent");

    // normal equations: G a = E[target·basis_i]
    Matrix<Rat> aug(n, n + 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug(i, j) = g.entries(i, j);
        aug(i, n) = expectation(rv_product(target, basis[i]), q);
    }
    std::vector<int> pivot_cols;
    bareiss_echelon(aug, pivot_cols);
    std::vector<Rat> a(n, Rat(0));
    for (int row = n - 1; row >= 0; --row) {
        Rat sum = aug(row, n);
        for (int j = row + 1; j < n; ++j) sum -= aug(row, j) * a[j];
        a[row] = sum / aug(row, row);
    }

    // the Gram solve proves only L²-equality; certify pointwise on support
    for (int x = 0; x < target.size(); ++x) {
        Rat residual = target.values[x];
        for (int j = 0; j < n; ++j) residual -= a[j] * basis[j].values[x];
        if (residual != 0) return Independent{};
    }
    return Coefficients{std::move(a)};
}

bool is_as_zero(const RandomVariable& rv, const TrueDistribution& q) {
    if (rv.size() != q.support_size())
        throw Error(Error::Kind::SupportMismatch, "random variable support size mismatch");
    for (const auto& v : rv.values)
        if (v != 0) return false;
    return true;
}

QuadraticFormAnalysis analyze_quadratic_form(const Matrix<Rat>& input) {
    const int n = input.rows();
    if (input.cols() != n)
        throw Error(Error::Kind::InvalidDims, "quadratic form matrix must be square");

    // Symmetric congruence sweep. Rows of `basis` are the current directions;
    // the invariant is form(i,j) := basis_i' · input · basis_j for undone rows.
    Matrix<Rat> basis = Matrix<Rat>::identity(n);
    auto form = [&](int i, int j) {
        Rat out = 0;
        for (int p = 0; p < n; ++p) {
            if (basis(i, p) == 0) continue;
            for (int q = 0; q < n; ++q)
                if (basis(j, q) != 0) out += basis(i, p) * input(p, q) * basis(j, q);
        }
        return out;
    };

    std::vector<Rat> diag_values;
    std::vector<std::vector<Rat>> directions;
    std::vector<bool> done(n, false);

    while (true) {
        int pivot = -1;
        for (int i = 0; i < n; ++i)
            if (!done[i] && form(i, i) != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) {
            // no nonzero diagonal; a nonzero off-diagonal pair splits into a
            // hyperbolic plane: (b_i+b_j) and (b_i−b_j) have values ±2c
            int oi = -1, oj = -1;
            for (int i = 0; i < n && oi < 0; ++i) {
                if (done[i]) continue;
                for (int j = i + 1; j < n; ++j)
                    if (!done[j] && form(i, j) != 0) {
                        oi = i;
                        oj = j;
                        break;
                    }
            }
            if (oi < 0) break;  // remaining block is identically zero: kernel
            for (int q = 0; q < n; ++q) {
                Rat bi = basis(oi, q), bj = basis(oj, q);
                basis(oi, q) = bi + bj;
                basis(oj, q) = bi - bj;
            }
            continue;  // both rows now have nonzero diagonal values
        }
        Rat d = form(pivot, pivot);
        std::vector<Rat> dir(n);
        for (int q = 0; q < n; ++q) dir[q] = basis(pivot, q);
        diag_values.push_back(d);
        directions.push_back(dir);
        done[pivot] = true;
        for (int i = 0; i < n; ++i) {
            if (done[i]) continue;
            Rat factor = form(i, pivot) / d;
            if (factor == 0) continue;
            for (int q = 0; q < n; ++q) basis(i, q) -= factor * basis(pivot, q);
        }
    }

    QuadraticFormAnalysis out;
    int npos = 0, nneg = 0;
    for (std::size_t k = 0; k < diag_values.size(); ++k) {
        if (diag_values[k] > 0) {
            ++npos;
            if (!out.positive) out.positive = directions[k];
        } else {
            ++nneg;
            if (!out.negative) out.negative = directions[k];
        }
    }
    out.rank = npos + nneg;
    for (int i = 0; i < n; ++i)
        if (!done[i]) {
            std::vector<Rat> v(n);
            for (int q = 0; q < n; ++q) v[q] = basis(i, q);
            out.kernel.push_back(v);
        }
    using Kind = QuadraticFormAnalysis::Kind;
    if (npos && nneg) out.kind = Kind::Indefinite;
    else if (npos) out.kind = out.rank == n ? Kind::PositiveDefinite : Kind::PositiveSemidefinite;
    else if (nneg) out.kind = out.rank == n ? Kind::NegativeDefinite : Kind::NegativeSemidefinite;
    else out.kind = Kind::Zero;
    return out;
}

std::vector<Rat> symmetric_pivots(const Matrix<Rat>& input) {
    Matrix<Rat> a = input;
    std::vector<Rat> pivots;
    const int n = a.rows();
    std::vector<bool> done(n, false);
    for (int step = 0; step < n; ++step) {
        int pivot = -1;
        for (int i = 0; i < n; ++i)
            if (!done[i] && a(i, i) != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) break;
        pivots.push_back(a(pivot, pivot));
        Rat d = a(pivot, pivot);
        for (int i = 0; i < n; ++i) {
            if (i == pivot || done[i]) continue;
            Rat factor = a(i, pivot) / d;
            if (factor == 0) continue;
            for (int j = 0; j < n; ++j) a(i, j) -= factor * a(pivot, j);
            for (int j = 0; j < n; ++j) a(j, i) = a(i, j);
        }
        done[pivot] = true;
    }
    return pivots;
}

}  // namespace rlct
