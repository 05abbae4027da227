#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "rlct/rational.hpp"

namespace rlct {

// Exponent tuple of a monomial in d variables.
struct MultiIndex {
    std::vector<int> e;

    MultiIndex() = default;
    explicit MultiIndex(int dim) : e(dim, 0) {}
    MultiIndex(std::initializer_list<int> init) : e(init) {}

    int dim() const { return static_cast<int>(e.size()); }

    int total_degree() const { return std::accumulate(e.begin(), e.end(), 0); }

    // sum of degrees over a set of positions
    int degree_on(const std::vector<int>& positions) const {
        int s = 0;
        for (int p : positions) s += e[p];
        return s;
    }

    int degree_range(int begin, int end) const {
        int s = 0;
        for (int p = begin; p < end; ++p) s += e[p];
        return s;
    }

    MultiIndex operator+(const MultiIndex& other) const {
        MultiIndex out(*this);
        for (int i = 0; i < dim(); ++i) out.e[i] += other.e[i];
        return out;
    }

    bool operator==(const MultiIndex& other) const { return e == other.e; }

    // ∏ e_i!
    Int factorial_product() const {
        Int out = 1;
        for (int v : e) out *= factorial(v);
        return out;
    }

    static MultiIndex unit(int dim, int position) {
        MultiIndex out(dim);
        out.e[position] = 1;
        return out;
    }
};

// Ordering: total degree first, then descending-lexicographic on exponents so
// that within a degree the monomial concentrated on the earliest variable
// comes first, e.g. (2,0) < (1,1) < (0,2).
struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        int da = a.total_degree(), db = b.total_degree();
        if (da != db) return da < db;
        return a.e > b.e;
    }
};

// All exponent tuples of total degree `degree` supported on `positions`
// (zero elsewhere), listed in the graded-lex order above.
inline std::vector<MultiIndex> monomials_of_degree(int dim, int degree,
                                                   const std::vector<int>& positions) {
    std::vector<MultiIndex> out;
    MultiIndex current(dim);
    auto rec = [&](auto&& self, std::size_t slot, int remaining) -> void {
        if (slot + 1 == positions.size()) {
            current.e[positions[slot]] = remaining;
            out.push_back(current);
            current.e[positions[slot]] = 0;
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            current.e[positions[slot]] = v;
            self(self, slot + 1, remaining - v);
        }
        current.e[positions[slot]] = 0;
    };
    if (positions.empty()) {
        if (degree == 0) out.push_back(current);
        return out;
    }
    rec(rec, 0, degree);
    return out;
}

inline std::string to_string(const MultiIndex& alpha) {
    std::string out = "(";
    for (int i = 0; i < alpha.dim(); ++i) {
        if (i) out += ",";
        out += std::to_string(alpha.e[i]);
    }
    return out + ")";
}

}  // namespace rlct
