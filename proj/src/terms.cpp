#include "stpp/terms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "stpp/error.hpp"
#include "stpp/text.hpp"

namespace stpp {

namespace {

bool is_axis(std::string_view s) { return s == "x" || s == "y" || s == "t"; }

// Accumulates "x^2" style factors into a monomial; returns false when the
// factor is not a coordinate factor.
bool add_axis_factor(std::string_view factor, CoordinateMonomial& m) {
    std::string_view base = factor;
    unsigned exponent = 1;
    if (const auto caret = factor.find('^'); caret != std::string_view::npos) {
        base = text::trim(factor.substr(0, caret));
        if (!is_axis(base)) return false;
        const auto e = text::parse_int(factor.substr(caret + 1), "monomial exponent");
        if (e < 0 || e > static_cast<long long>(kMaxMonomialDegree))
            throw ParseError("exponent out of range in '" + std::string(factor) + "'");
        exponent = static_cast<unsigned>(e);
    }
    if (base == "x")
        m.ex += exponent;
    else if (base == "y")
        m.ey += exponent;
    else if (base == "t")
        m.et += exponent;
    else
        return false;
    return true;
}

void check_degree(const CoordinateMonomial& m, std::string_view token) {
    if (m.degree() > kMaxMonomialDegree)
        throw ParseError("monomial '" + std::string(token) + "' exceeds total degree " +
                         std::to_string(kMaxMonomialDegree));
}

bool looks_numeric(std::string_view s) {
    return !s.empty() && (std::isdigit(static_cast<unsigned char>(s.front())) || s.front() == '.');
}

}  // namespace

CovariateFunction parse_term(std::string_view token, const ExternalCovariates& externals) {
    token = text::trim(token);
    if (token.empty()) throw ParseError("empty term");
    if (token == "1") return Intercept{};
    if (const auto it = externals.find(std::string(token)); it != externals.end()) return it->second;

    CoordinateMonomial m;
    for (const auto& factor : text::split(token, '*')) {
        if (!add_axis_factor(factor, m)) throw ParseError("unknown term '" + std::string(token) + "'");
    }
    check_degree(m, token);
    if (m.degree() == 0) return Intercept{};
    return m;
}

std::vector<CovariateFunction> parse_terms(std::string_view list, const ExternalCovariates& externals) {
    std::vector<CovariateFunction> out;
    for (const auto& tok : text::split(list, ',')) out.push_back(parse_term(tok, externals));
    return out;
}

LogLinearIntensity::LogLinearIntensity(std::vector<Component> components) : components_(std::move(components)) {
    for (const auto& c : components_) {
        if (!std::isfinite(c.coefficient)) throw InvalidArgument("non-finite coefficient in log-intensity");
        if (c.monomial.degree() > kMaxMonomialDegree) throw InvalidArgument("log-intensity monomial degree too high");
    }
}

LogLinearIntensity LogLinearIntensity::parse(std::string_view expr) {
    const std::string source(expr);
    std::vector<std::pair<double, std::string>> summands;
    double sign = 1.0;
    std::string current;
    bool have_content = false;
    auto flush = [&] {
        const auto body = text::trim(current);
        if (body.empty()) throw ParseError("malformed log-intensity '" + source + "'");
        summands.emplace_back(sign, std::string(body));
        current.clear();
        have_content = false;
    };
    for (std::size_t i = 0; i < expr.size(); ++i) {
        const char c = expr[i];
        const bool exponent_sign = (c == '+' || c == '-') && i >= 2 && (expr[i - 1] == 'e' || expr[i - 1] == 'E') &&
                                   std::isdigit(static_cast<unsigned char>(expr[i - 2]));
        if ((c == '+' || c == '-') && !exponent_sign) {
            if (have_content) {
                flush();
                sign = c == '-' ? -1.0 : 1.0;
            } else {
                sign *= c == '-' ? -1.0 : 1.0;
            }
            continue;
        }
        current += c;
        if (!std::isspace(static_cast<unsigned char>(c))) have_content = true;
    }
    if (!have_content) throw ParseError("malformed log-intensity '" + source + "'");
    flush();

    std::vector<Component> comps;
    for (const auto& [s, body] : summands) {
        double coef = s;
        CoordinateMonomial m;
        for (const auto& factor : text::split(body, '*')) {
            if (looks_numeric(factor))
                coef *= text::parse_double(factor, "log-intensity coefficient");
            else if (!add_axis_factor(factor, m))
                throw ParseError("unknown symbol '" + factor + "' in log-intensity '" + source + "'");
        }
        check_degree(m, body);
        auto same = std::find_if(comps.begin(), comps.end(), [&](const Component& c) { return c.monomial == m; });
        if (same != comps.end())
            same->coefficient += coef;
        else
            comps.push_back({coef, m});
    }
    return LogLinearIntensity(std::move(comps));
}

double LogLinearIntensity::log_value(const SpaceTimePoint& p) const {
    double eta = 0.0;
    for (const auto& c : components_)
        eta += c.coefficient * evaluate_covariate(CovariateFunction{c.monomial}, p);
    return eta;
}

double LogLinearIntensity::operator()(const SpaceTimePoint& p) const { return std::exp(log_value(p)); }

std::string LogLinearIntensity::to_string() const {
    if (components_.empty()) return "0";
    std::string out;
    for (const auto& c : components_) {
        if (!out.empty()) out += " + ";
        out += text::format_double(c.coefficient);
        if (c.monomial.degree() > 0) out += "*" + term_name(CovariateFunction{c.monomial});
    }
    return out;
}

std::vector<CovariateFunction> LogLinearIntensity::model_terms() const {
    std::vector<CovariateFunction> terms{Intercept{}};
    for (const auto& c : components_)
        if (c.monomial.degree() > 0) terms.emplace_back(c.monomial);
    return terms;
}

std::vector<double> LogLinearIntensity::model_coefficients() const {
    std::vector<double> coefs{0.0};
    for (const auto& c : components_) {
        if (c.monomial.degree() > 0)
            coefs.push_back(c.coefficient);
        else
            coefs[0] += c.coefficient;
    }
    return coefs;
}

}  // namespace stpp
