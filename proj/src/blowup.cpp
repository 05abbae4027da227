#include "rlct/blowup.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace rlct {

std::string BlowupChart::id(const std::vector<std::string>& names) const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) os << ",";
        os << (path[i] < static_cast<int>(names.size()) ? names[path[i]]
                                                        : "u" + std::to_string(path[i] + 1));
    }
    os << "]";
    return os.str();
}

namespace {

struct ChartBuilder {
    int d;
    std::vector<Polynomial<Rat>> images;  // θ_j in current chart coordinates
    MultiIndex jac;
    std::vector<int> path;

    explicit ChartBuilder(int d_) : d(d_), jac(d_) {
        for (int j = 0; j < d; ++j) images.push_back(Polynomial<Rat>::variable(d, j));
    }

    // blow up the subvariety {u_c = 0 : c ∈ center}; chart with exceptional
    // variable e ∈ center: u_c ↦ u_e·u_c for c ∈ center∖{e}
    void apply_stage(const std::vector<int>& center, int e) {
        std::vector<Polynomial<Rat>> stage;
        for (int j = 0; j < d; ++j) stage.push_back(Polynomial<Rat>::variable(d, j));
        Polynomial<Rat> ue = Polynomial<Rat>::variable(d, e);
        for (int c : center)
            if (c != e) stage[c] = ue * stage[c];
        for (auto& img : images) img = img.substitute(stage);
        // pull the accumulated Jacobian monomial through this substitution,
        // then multiply by the stage's own Jacobian u_e^(codim − 1)
        int moved = 0;
        for (int c : center)
            if (c != e) moved += jac.e[c];
        jac.e[e] += moved + static_cast<int>(center.size()) - 1;
        path.push_back(e);
    }

    BlowupChart finish(bool terminal) const {
        BlowupChart chart;
        chart.path = path;
        chart.substitution = images;
        chart.jacobian_exponents = jac;
        chart.terminal = terminal;
        chart.exceptional_var = path.back();
        return chart;
    }
};

}  // namespace

std::vector<BlowupChart> build_charts(int d, int r, int m, ChartStages stages) {
    if (d < 1 || r < 1 || r > d || m < 1)
        throw Error(Error::Kind::InvalidDims, "build_charts needs 1 <= r <= d, m >= 1");
    std::vector<BlowupChart> out;

    std::vector<int> origin(d);
    for (int j = 0; j < d; ++j) origin[j] = j;

    for (int i = 0; i < d; ++i) {
        ChartBuilder stage1(d);
        stage1.apply_stage(origin, i);
        if (i < r || m == 1) {
            out.push_back(stage1.finish(true));
            continue;
        }
        // degenerate chain: centers {θ_1..θ_r, θ_i}, up to m blow-ups total
        out.push_back(stage1.finish(false));
        std::vector<int> center;
        for (int k = 0; k < r; ++k) center.push_back(k);
        center.push_back(i);

        ChartBuilder chain = stage1;
        for (int stage = 2; stage <= m; ++stage) {
            for (int j = 0; j < r; ++j) {
                ChartBuilder branch = chain;
                branch.apply_stage(center, j);
                out.push_back(branch.finish(true));
            }
            chain.apply_stage(center, i);
            out.push_back(chain.finish(stage == m));
        }
    }

    if (stages == ChartStages::Final) {
        std::vector<BlowupChart> finals;
        for (auto& chart : out)
            if (static_cast<int>(chart.path.size()) == m) finals.push_back(chart);
        return finals;
    }
    return out;
}

PullBack pull_back(const Polynomial<Rat>& k_poly, const BlowupChart& chart) {
    if (k_poly.is_zero())
        throw Error(Error::Kind::ZeroPolynomial, "pull_back of the zero polynomial");
    const int d = k_poly.dim();
    Polynomial<Rat> pulled = k_poly.substitute(chart.substitution);

    PullBack out;
    out.k = MultiIndex(d);
    for (int j = 0; j < d; ++j) out.k.e[j] = std::numeric_limits<int>::max();
    for (const auto& [alpha, c] : pulled.terms())
        for (int j = 0; j < d; ++j) out.k.e[j] = std::min(out.k.e[j], alpha.e[j]);

    out.unit_factor = Polynomial<Rat>(d);
    for (const auto& [alpha, c] : pulled.terms()) {
        MultiIndex beta = alpha;
        for (int j = 0; j < d; ++j) beta.e[j] -= out.k.e[j];
        out.unit_factor.add_term(beta, c);
    }
    return out;
}

namespace {

// {−1/4, 0, 1/4}^(free positions), exceptional coordinate pinned to 0
std::vector<std::vector<Rat>> exceptional_grid(int d, int exceptional_var) {
    std::vector<Rat> levels = {Rat(-1, 4), Rat(0), Rat(1, 4)};
    std::vector<std::vector<Rat>> points;
    std::vector<Rat> current(d, Rat(0));
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == d) {
            points.push_back(current);
            return;
        }
        if (pos == exceptional_var) {
            self(self, pos + 1);
            return;
        }
        for (const Rat& v : levels) {
            current[pos] = v;
            self(self, pos + 1);
        }
        current[pos] = Rat(0);
    };
    rec(rec, 0);
    return points;
}

bool is_pure_chain(const BlowupChart& chart) {
    for (int e : chart.path)
        if (e != chart.path.front()) return false;
    return true;
}

}  // namespace

UnitCheck unit_check(const Polynomial<Rat>& unit_factor, const BlowupChart& chart,
                     const NormalizationResult& res, const FmDecomposition& fm) {
    UnitCheck out;
    const int d = res.dim();
    const int e = chart.exceptional_var;
    // S lives in the charts along a degenerate chain: the direction vector is
    // the degenerate block of the point with 1 in the chain's own slot
    const bool s_possible = is_pure_chain(chart) && e >= res.r && fm.m > 0;

    for (const auto& point : exceptional_grid(d, e)) {
        if (s_possible) {
            bool first_block_zero = true;
            for (int k = 0; k < res.r; ++k)
                if (point[k] != 0) first_block_zero = false;
            if (first_block_zero) {
                std::vector<Rat> direction(fm.dr);
                for (int j = 0; j < fm.dr; ++j) direction[j] = point[res.r + j];
                direction[e - res.r] = 1;
                if (fm_vanishes_at(fm, direction)) {
                    out.excluded_s.push_back(point);
                    continue;
                }
            }
        }
        if (unit_factor.evaluate(point) <= 0) {
            out.pass = false;
            out.failures.push_back(point);
        }
    }
    return out;
}

ChartTable chart_table(const Polynomial<Rat>& k_poly, const NormalizationResult& res,
                       const FmDecomposition& fm) {
    if (!res.m)
        throw Error(Error::Kind::OrderTooHigh,
                    "chart table needs a finite vanishing order");
    ChartTable table;
    auto charts = build_charts(res.dim(), res.r, *res.m, ChartStages::All);

    bool any = false;
    for (auto& chart : charts) {
        ChartRow row;
        row.chart = chart;
        PullBack pb = pull_back(k_poly, chart);
        row.k = pb.k;
        row.h = chart.jacobian_exponents;
        row.unit_factor = pb.unit_factor;

        Rat best;
        bool have = false;
        int count = 0;
        for (int j = 0; j < res.dim(); ++j) {
            if (pb.k.e[j] == 0) continue;  // (h+1)/0 = ∞: excluded from the min
            Rat ratio = Rat(row.h.e[j] + 1, pb.k.e[j]);
            if (!have || ratio < best) {
                best = ratio;
                have = true;
                count = 1;
            } else if (ratio == best) {
                ++count;
            }
        }
        if (!have)
            throw Error(Error::Kind::ZeroPolynomial,
                        "chart pullback has no exceptional exponent");
        row.chart_lambda = best;
        row.multiplicity = count;

        UnitCheck uc = unit_check(pb.unit_factor, chart, res, fm);
        row.unit_pass = uc.pass;
        row.touches_s = !uc.excluded_s.empty();
        if (row.touches_s) table.upper_bound_only = true;

        if (uc.pass) {
            if (!any || row.chart_lambda < table.lambda) {
                table.lambda = row.chart_lambda;
                table.multiplicity = row.multiplicity;
                any = true;
            } else if (row.chart_lambda == table.lambda) {
                table.multiplicity = std::max(table.multiplicity, row.multiplicity);
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (!any)
        throw Error(Error::Kind::Internal, "no chart passed the unit check");

    if (table.upper_bound_only) {
        std::ostringstream os;
        os << "S is nonempty: F_m vanishes a.s. along some exceptional directions; "
              "the chart minimum is an upper bound for the RLCT";
        table.exceptional_set = os.str();
    }
    return table;
}

}  // namespace rlct
