#include "ouocc/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ouocc/errors.hpp"
#include "ouocc/simpson.hpp"

namespace ouocc {

namespace {

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// e^{-s^2} * 2 / sqrt(pi): derivative of erf.
double erf_slope(double s) { return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-s * s); }

double s1_from(double s0, double s0_sq_minus_c_sq, double eps) {
    return s0 + std::pow(s0 * s0_sq_minus_c_sq * eps, 0.25);
}

void require_centered(const OUParams& params) {
    if (!params.centered())
        throw std::invalid_argument("analytic occupation times need a centered process (mu = u0 = 0)");
}

// Adaptive G7-K15 over [lo, hi] with extra breakpoints; pieces are
// integrated independently so a sharp layer near t = 0 gets its own panel.
template <class F>
double integrate_pieces(F&& f, double lo, double hi, std::vector<double> breaks, double rel_tol) {
    using boost::math::quadrature::gauss_kronrod;
    breaks.push_back(lo);
    breaks.push_back(hi);
    std::sort(breaks.begin(), breaks.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = std::max(lo, breaks[i]);
        const double b = std::min(hi, breaks[i + 1]);
        if (b > a)
            total += gauss_kronrod<double, 15>::integrate(f, a, b, 15, rel_tol);
    }
    return total;
}

// Width of the region near t = 0 where erf(C / sqrt(1 - e^{-2 lambda t}))
// has not yet settled to sign(C).
std::vector<double> layer_breaks(std::initializer_list<double> cs, double lambda, double t_end) {
    std::vector<double> breaks;
    for (double c : cs) {
        if (!std::isfinite(c) || c == 0.0)
            continue;
        const double width = c * c / lambda;
        for (double w : {width, 10.0 * width})
            if (w < t_end)
                breaks.push_back(w);
    }
    return breaks;
}

}  // namespace

void AnalyticConfig::validate() const {
    if (!(eps_taylor > 0.0) || !(simpson_rel_tol > 0.0) || !(oracle_rel_tol > 0.0))
        throw std::invalid_argument("analytic tolerances must be positive");
    if (!(s2_min >= 10.0))
        throw std::invalid_argument("tail cut s2_min must be at least 10");
}

void check_precision_guard(double lambda, double t_end) {
    if (!(2.0 * lambda * t_end < kPrecisionGuard))
        throw PrecisionGuardError("2*lambda*T = " + std::to_string(2.0 * lambda * t_end) +
                                  " must stay below 37");
}

ErfIntegralSpec ErfIntegralSpec::make(double c, double lambda, double t_end,
                                      const AnalyticConfig& config) {
    config.validate();
    if (c == 0.0 || !std::isfinite(c))
        throw std::invalid_argument("substitution needs a finite nonzero C");
    if (!(lambda > 0.0) || !(t_end > 0.0))
        throw std::invalid_argument("lambda and T must be positive");
    check_precision_guard(lambda, t_end);

    const double abs_c = std::abs(c);
    ErfIntegralSpec spec{};
    spec.c = c;
    spec.lambda = lambda;
    spec.t_end = t_end;
    spec.eps = config.eps_taylor;
    spec.s0 = abs_c / std::sqrt(-std::expm1(-2.0 * lambda * t_end));
    spec.s0_sq_minus_c_sq = abs_c * abs_c / std::expm1(2.0 * lambda * t_end);
    if (spec.s0 >= config.s2_min) {
        spec.s1 = spec.s0;
        spec.s2 = spec.s0;
    } else {
        spec.s2 = config.s2_min;
        spec.s1 = std::min(s1_from(spec.s0, spec.s0_sq_minus_c_sq, spec.eps), spec.s2);
    }
    return spec;
}

double variance_k(const OUParams& params, double t) {
    require_centered(params);
    if (!(t > 0.0))
        throw std::invalid_argument("variance k needs t > 0");
    const double sigma = params.sigma();
    const double lambda = params.lambda();
    return sigma * sigma * -std::expm1(-2.0 * lambda * t) / (2.0 * lambda);
}

double choose_s1(double s0, double c, double eps) {
    const double abs_c = std::abs(c);
    if (!(s0 > abs_c))
        throw std::invalid_argument("choose_s1 needs s0 > |C|");
    if (!(eps >= 0.0))
        throw std::invalid_argument("choose_s1 needs eps >= 0");
    return s1_from(s0, (s0 - abs_c) * (s0 + abs_c), eps);
}

double taylor_quadratic_integral(double s0, double s1, double c, double value, double slope) {
    const double abs_c = std::abs(c);
    return taylor_quadratic_integral(s0, s1, c, value, slope, (s0 - abs_c) * (s0 + abs_c));
}

double taylor_quadratic_integral(double s0, double s1, double c, double value, double slope,
                                 double s0_sq_minus_c_sq) {
    const double cc = std::abs(c);
    if (!(cc > 0.0) || !(s0 > cc) || !(s1 >= s0) || !(s0_sq_minus_c_sq > 0.0))
        throw std::invalid_argument("Taylor zone needs s1 >= s0 > |C| > 0");
    if (s1 == s0)
        return 0.0;

    // q(s) = A + B s + D s^2 against 1/(s (s^2 - C^2)) splits into
    //   J0 = int ds / (s (s^2 - C^2)) = ln((1 - C^2/s1^2) / (1 - C^2/s0^2)) / (2 C^2)
    //   J1 = int ds / (s^2 - C^2)     = ln((s1 - C)(s0 + C) / ((s1 + C)(s0 - C))) / (2 C)
    //   J2 = int s ds / (s^2 - C^2)   = ln((s1^2 - C^2) / (s0^2 - C^2)) / 2
    // each rewritten in terms of d = s1 - s0 and q0 = s0^2 - C^2 to avoid
    // cancellation. Close to the guard q0 is ~1e-15 and s0 - C is below one
    // ulp of s0, so s0 - C only enters as q0 / (s0 + C).
    const double d = s1 - s0;
    const double q0 = s0_sq_minus_c_sq;
    const double j0 = std::log1p(cc * cc * d * (s1 + s0) / (s1 * s1 * q0)) / (2.0 * cc * cc);
    const double j1 = std::log1p(2.0 * cc * d * (s0 + cc) / (q0 * (s1 + cc))) / (2.0 * cc);
    const double j2 = 0.5 * std::log1p(d * (s1 + s0) / q0);

    // (s - s0) - s0 (s - s0)^2 = -s0 s^2 + (1 + 2 s0^2) s - (s0 + s0^3)
    const double a = value - slope * (s0 + s0 * s0 * s0);
    const double b = slope * (1.0 + 2.0 * s0 * s0);
    const double dd = -slope * s0;
    return a * j0 + b * j1 + dd * j2;
}

double taylor_i1_closed_form(const ErfIntegralSpec& spec) {
    if (spec.s1 == spec.s0)
        return 0.0;
    return taylor_quadratic_integral(spec.s0, spec.s1, spec.c, erf(spec.s0), erf_slope(spec.s0),
                                     spec.s0_sq_minus_c_sq);
}

double simpson_i2(const ErfIntegralSpec& spec, const AnalyticConfig& config) {
    if (spec.s1 > spec.s2)
        throw std::invalid_argument("Simpson zone needs s1 <= s2");
    if (spec.s1 == spec.s2)
        return 0.0;
    const double cc = spec.abs_c();
    auto f = [cc](double s) { return erf(s) / (s * (s - cc) * (s + cc)); };

    // The integrand behaves like 1/(s - C) near s1; panels double in
    // distance from C so each carries a comparable share of the integral.
    std::vector<double> nodes{spec.s1};
    const double gap = spec.s1 - cc;
    for (double x = cc + 2.0 * gap; x < spec.s2; x = cc + 2.0 * (x - cc))
        nodes.push_back(x);
    nodes.push_back(spec.s2);

    double rough = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        rough += composite_simpson(f, nodes[i], nodes[i + 1], 4);
    const double panel_tol =
        config.simpson_rel_tol * std::abs(rough) / static_cast<double>(nodes.size() - 1);

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        total += adaptive_simpson(f, nodes[i], nodes[i + 1], panel_tol);
    return total;
}

double tail_i3(const ErfIntegralSpec& spec) {
    const double cc = spec.abs_c();
    if (!(spec.s2 > cc))
        throw std::invalid_argument("tail needs s2 > |C|");
    if (!(spec.s2 >= 10.0))
        throw std::invalid_argument("tail needs s2 >= 10");
    // ln(s2^2 / (s2^2 - C^2)) = log1p(C^2 / (s2^2 - C^2))
    const double q2 = spec.s2 == spec.s0 ? spec.s0_sq_minus_c_sq
                                         : (spec.s2 - cc) * (spec.s2 + cc);
    return std::log1p(cc * cc / q2) / (2.0 * cc * cc);
}

double erf_time_integral_split(const ErfIntegralSpec& spec, const AnalyticConfig& config) {
    const double cc = spec.abs_c();
    const double g = taylor_i1_closed_form(spec) + simpson_i2(spec, config) + tail_i3(spec);
    return sign_of(spec.c) * (cc * cc / spec.lambda) * g;
}

double erf_time_integral_split(double c, double lambda, double t_end, const AnalyticConfig& config) {
    config.validate();
    check_precision_guard(lambda, t_end);
    if (c == 0.0)
        return 0.0;
    return erf_time_integral_split(ErfIntegralSpec::make(c, lambda, t_end, config), config);
}

double erf_time_integral_direct(double c, double lambda, double t_end, const AnalyticConfig& config) {
    config.validate();
    if (!(lambda > 0.0) || !(t_end > 0.0))
        throw std::invalid_argument("lambda and T must be positive");
    check_precision_guard(lambda, t_end);
    if (c == 0.0)
        return 0.0;
    auto f = [c, lambda](double t) {
        if (t == 0.0)
            return sign_of(c);
        return erf(c / std::sqrt(-std::expm1(-2.0 * lambda * t)));
    };
    return integrate_pieces(f, 0.0, t_end, layer_breaks({c}, lambda, t_end),
                            config.oracle_rel_tol);
}

double expected_occupation_direct(const OUParams& params, const ObservationWindow& window,
                                  const AnalyticConfig& config) {
    config.validate();
    require_centered(params);
    const double lambda = params.lambda();
    const double t_end = window.t_end();
    check_precision_guard(lambda, t_end);
    if (window.a() == window.b())
        return 0.0;

    const double alpha = std::sqrt(lambda) / params.sigma();
    const double ca = alpha * window.a();
    const double cb = alpha * window.b();
    auto f = [ca, cb, lambda](double t) {
        if (t == 0.0)
            return 0.5 * (sign_of(cb) - sign_of(ca));
        const double scale = 1.0 / std::sqrt(-std::expm1(-2.0 * lambda * t));
        return 0.5 * (erf(cb * scale) - erf(ca * scale));
    };
    const double value = integrate_pieces(f, 0.0, t_end, layer_breaks({ca, cb}, lambda, t_end),
                                          config.oracle_rel_tol);
    return std::clamp(value, 0.0, t_end);
}

double expected_occupation_split(const OUParams& params, const ObservationWindow& window,
                                 const AnalyticConfig& config) {
    config.validate();
    require_centered(params);
    const double lambda = params.lambda();
    const double t_end = window.t_end();
    check_precision_guard(lambda, t_end);
    if (window.a() == window.b())
        return 0.0;

    const double alpha = std::sqrt(lambda) / params.sigma();
    auto endpoint = [&](double x) {
        if (std::isinf(x))
            return x > 0.0 ? t_end : -t_end;
        return erf_time_integral_split(alpha * x, lambda, t_end, config);
    };
    // erf is odd, so [-c, c] needs a single split integral.
    const double value = window.a() == -window.b()
                             ? endpoint(window.b())
                             : 0.5 * (endpoint(window.b()) - endpoint(window.a()));
    return std::clamp(value, 0.0, t_end);
}

}  // namespace ouocc
