#include "rlct/model.hpp"

#include <fstream>
#include <sstream>

namespace rlct {

namespace {

std::string strip_comment(const std::string& line) {
    auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

std::vector<std::string> split_ws(const std::string& text) {
    std::istringstream is(text);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

int ModelSpec::outcome_index(const std::string& label) const {
    for (int i = 0; i < n_outcomes(); ++i)
        if (outcomes[i] == label) return i;
    throw Error(Error::Kind::OutcomeOutsideSupport, "unknown outcome '" + label + "'");
}

TrueDistribution ModelSpec::true_distribution() const {
    TrueDistribution out;
    for (int x = 0; x < n_outcomes(); ++x) {
        Rat q = evaluate_expr<Rat>(*prob_exprs[x], theta_star);
        out.weights.push_back(q);
        if (q > 0) out.support.push_back(x);
    }
    return out;
}

ModelSpec parse_model(const std::string& text, const std::string& name) {
    ModelSpec spec;
    spec.name = name;
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    bool saw_params = false, saw_theta = false;
    std::vector<std::string> theta_tokens;
    struct PendingOutcome {
        std::string label, expr;
        int line, col;
    };
    std::vector<PendingOutcome> pending;

    while (std::getline(is, raw)) {
        ++line_no;
        std::string content = trim(strip_comment(raw));
        if (content.empty()) continue;
        auto colon = content.find(':');
        if (colon == std::string::npos)
            throw ParseError(Error::Kind::SyntaxError, "expected 'key: value'", line_no, 1);
        std::string key_field = trim(content.substr(0, colon));
        std::string value = content.substr(colon + 1);
        auto key_tokens = split_ws(key_field);
        if (key_tokens.empty())
            throw ParseError(Error::Kind::SyntaxError, "missing key", line_no, 1);
        const std::string& key = key_tokens[0];

        if (key == "params") {
            spec.params = split_ws(value);
            if (spec.params.empty())
                throw ParseError(Error::Kind::SyntaxError, "params line declares nothing",
                                 line_no, 1);
            saw_params = true;
        } else if (key == "theta_star") {
            theta_tokens = split_ws(value);
            saw_theta = true;
        } else if (key == "theta_star_unique") {
            std::string flag = trim(value);
            spec.theta_star_unique = (flag == "yes" || flag == "true" || flag == "1");
        } else if (key == "outcome") {
            if (key_tokens.size() != 2)
                throw ParseError(Error::Kind::SyntaxError, "outcome line needs a label",
                                 line_no, 1);
            int col = static_cast<int>(colon) + 2;
            pending.push_back({key_tokens[1], value, line_no, col});
        } else {
            throw ParseError(Error::Kind::SyntaxError, "unknown key '" + key + "'", line_no, 1);
        }
    }

    if (!saw_params)
        throw ParseError(Error::Kind::SyntaxError, "missing params line", line_no, 1);
    if (!saw_theta)
        throw ParseError(Error::Kind::SyntaxError, "missing theta_star line", line_no, 1);
    if (theta_tokens.size() != spec.params.size())
        throw ParseError(Error::Kind::SyntaxError,
                         "theta_star needs one rational per parameter", line_no, 1);
    for (const auto& tok : theta_tokens) {
        auto v = parse_rational(tok);
        if (!v)
            throw ParseError(Error::Kind::SyntaxError, "bad rational '" + tok + "'", line_no, 1);
        spec.theta_star.push_back(*v);
    }
    if (pending.size() < 2)
        throw ParseError(Error::Kind::SyntaxError, "need at least two outcomes", line_no, 1);

    for (const auto& p : pending) {
        for (const auto& label : spec.outcomes)
            if (label == p.label)
                throw ParseError(Error::Kind::DuplicateOutcome,
                                 "duplicate outcome '" + p.label + "'", p.line, 1);
        spec.outcomes.push_back(p.label);
        spec.prob_exprs.push_back(parse_expression(p.expr, spec.params, p.line, p.col));
    }

    // at θ*: probabilities must be a distribution (the full identity in θ is
    // check_model's job)
    Rat total = 0;
    for (int x = 0; x < spec.n_outcomes(); ++x) {
        Rat q = evaluate_expr<Rat>(*spec.prob_exprs[x], spec.theta_star);
        if (q < 0)
            throw ParseError(Error::Kind::SyntaxError,
                             "outcome '" + spec.outcomes[x] + "' has negative probability at theta_star",
                             pending[x].line, 1);
        total += q;
    }
    if (total != 1)
        throw ParseError(Error::Kind::SyntaxError,
                         "probabilities at theta_star sum to " + to_string(total) + ", not 1",
                         line_no, 1);
    return spec;
}

ModelSpec parse_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(Error::Kind::SyntaxError, "cannot open model file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    auto slash = path.find_last_of('/');
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    if (name.size() > 6 && name.substr(name.size() - 6) == ".model")
        name = name.substr(0, name.size() - 6);
    return parse_model(buf.str(), name);
}

std::string pretty_print(const ModelSpec& spec) {
    std::ostringstream os;
    os << "params:";
    for (const auto& p : spec.params) os << " " << p;
    os << "\n" << "theta_star:";
    for (const auto& v : spec.theta_star) os << " " << v;
    os << "\n";
    if (spec.theta_star_unique) os << "theta_star_unique: yes\n";
    for (int x = 0; x < spec.n_outcomes(); ++x)
        os << "outcome " << spec.outcomes[x] << ": " << to_string(*spec.prob_exprs[x]) << "\n";
    return os.str();
}

Jet<Rat> evaluate_prob_jet(const ModelSpec& spec, int outcome, int cap) {
    std::vector<Jet<Rat>> seeds;
    for (int i = 0; i < spec.d(); ++i)
        seeds.push_back(Jet<Rat>::seed_variable(i, spec.d(), cap, spec.theta_star[i]));
    return evaluate_expr_jet(*spec.prob_exprs[outcome], seeds);
}

Jet<Rat> f_jet(const ModelSpec& spec, int outcome, int cap) {
    Rat q = evaluate_expr<Rat>(*spec.prob_exprs[outcome], spec.theta_star);
    if (q <= 0)
        throw Error(Error::Kind::OutcomeOutsideSupport,
                    "outcome '" + spec.outcomes[outcome] + "' has q(x) = 0");
    Jet<Rat> p = evaluate_prob_jet(spec, outcome, cap);
    return -jet_log(p.scaled(Rat(1) / q));
}

DiagnosticsReport check_model(const ModelSpec& spec, int cap) {
    DiagnosticsReport report;
    Jet<Rat> sum(spec.d(), cap);
    for (int x = 0; x < spec.n_outcomes(); ++x) sum = sum + evaluate_prob_jet(spec, x, cap);
    Jet<Rat> residual = sum - Jet<Rat>::constant(spec.d(), cap, Rat(1));
    report.normalization_ok = residual.is_zero();
    if (!report.normalization_ok) {
        const auto& [alpha, value] = *residual.poly().terms().begin();
        report.offending = alpha;
        report.offending_value = value;
    }
    report.weights_nonnegative = true;
    TrueDistribution q = spec.true_distribution();
    for (const auto& w : q.weights)
        if (w < 0) report.weights_nonnegative = false;
    report.support = q.support;
    return report;
}

}  // namespace rlct
