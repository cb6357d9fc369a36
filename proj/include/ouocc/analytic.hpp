#pragma once

#include "ouocc/occupation_mc.hpp"
#include "ouocc/ou_sde.hpp"

namespace ouocc {

/// The error function used everywhere in the library (glibc erf, < 1 ulp).
inline double erf(double x) noexcept { return std::erf(x); }

/// Largest admissible 2*lambda*T for analytic evaluation.
inline constexpr double kPrecisionGuard = 37.0;

struct AnalyticConfig {
    double eps_taylor = 1e-8;        ///< error budget of the Taylor zone [s0, s1]
    double s2_min = 10.0;            ///< tail cut; erf(s) = 1 beyond it to 1e-44
    double simpson_rel_tol = 1e-10;  ///< middle zone [s1, s2]
    double oracle_rel_tol = 1e-12;   ///< time-domain quadrature

    /// Throws std::invalid_argument on non-positive tolerances or s2_min < 10.
    void validate() const;
};

/// Throws PrecisionGuardError if 2 * lambda * t_end >= 37.
void check_precision_guard(double lambda, double t_end);

/**
 * One instance of int_0^T erf(C / sqrt(1 - e^{-2 lambda t})) dt after the
 * substitution s = |C| / sqrt(1 - e^{-2 lambda t}), which turns it into
 * (C^2 / lambda) * int_{s0}^inf erf(s) / (s (s^2 - C^2)) ds.
 *
 * The s-range is split as [s0, s1] (quadratic Taylor expansion of erf at
 * s0, integrated in closed form), [s1, s2] (Simpson) and [s2, inf)
 * (erf replaced by 1). Degenerate orderings are normalized on construction:
 * if s0 >= s2_min the first two zones are empty and s2 = s0; otherwise
 * s1 is capped at s2.
 */
struct ErfIntegralSpec {
    double c;              ///< signed C; the zones use |C|
    double lambda;
    double t_end;
    double eps;            ///< Taylor-zone tolerance
    double s0;
    double s1;
    double s2;
    double s0_sq_minus_c_sq;  ///< s0^2 - C^2 = C^2 / (e^{2 lambda T} - 1), kept exact

    /// Throws std::invalid_argument for C == 0, non-positive lambda/T/eps,
    /// PrecisionGuardError for 2 lambda T >= 37.
    static ErfIntegralSpec make(double c, double lambda, double t_end,
                                const AnalyticConfig& config = {});

    double abs_c() const noexcept { return std::abs(c); }
};

/// sigma^2 (1 - e^{-2 lambda t}) / (2 lambda): variance of the centered
/// process at time t > 0.
double variance_k(const OUParams& params, double t);

/// s0 + (s0 (s0^2 - C^2) eps)^{1/4}; with this choice the Taylor-zone
/// error is at most 2 eps / (3 sqrt(pi)) ~ 0.376 eps. Requires s0 > |C|.
double choose_s1(double s0, double c, double eps);

/**
 * int_{s0}^{s1} q(s) / (s (s^2 - C^2)) ds in closed form, where
 * q(s) = value + slope * ((s - s0) - s0 (s - s0)^2).
 *
 * With value = erf(s0) and slope = 2 e^{-s0^2} / sqrt(pi), q is the
 * quadratic Taylor polynomial of erf at s0. Requires s1 >= s0 > |C| > 0.
 */
double taylor_quadratic_integral(double s0, double s1, double c, double value, double slope);

/// Same, with s0^2 - C^2 supplied by the caller (accurate when s0 ~ C).
double taylor_quadratic_integral(double s0, double s1, double c, double value, double slope,
                                 double s0_sq_minus_c_sq);

/// I1: the Taylor zone of the spec.
double taylor_i1_closed_form(const ErfIntegralSpec& spec);

/// I2: adaptive Simpson of erf(s) / (s (s^2 - C^2)) over [s1, s2].
double simpson_i2(const ErfIntegralSpec& spec, const AnalyticConfig& config = {});

/// I3 = ln(s2^2 / (s2^2 - C^2)) / (2 C^2). Requires s2 > |C| and s2 >= 10.
double tail_i3(const ErfIntegralSpec& spec);

/// (C^2 / lambda) (I1 + I2 + I3), signed like C.
double erf_time_integral_split(const ErfIntegralSpec& spec, const AnalyticConfig& config = {});

/// int_0^T erf(C / sqrt(1 - e^{-2 lambda t})) dt via the split scheme;
/// 0 for C == 0, odd in C.
double erf_time_integral_split(double c, double lambda, double t_end,
                               const AnalyticConfig& config = {});

/// Same integral by adaptive Gauss-Kronrod quadrature in t.
double erf_time_integral_direct(double c, double lambda, double t_end,
                                const AnalyticConfig& config = {});

/**
 * Expected occupation time of [a, b] by the centered OU process on [0, T],
 * 1/2 int_0^T erf(alpha b / sqrt(1 - e^{-2 lambda t}))
 *           - erf(alpha a / sqrt(1 - e^{-2 lambda t})) dt,  alpha = sqrt(lambda) / sigma,
 * evaluated by adaptive quadrature in the time domain.
 *
 * Throws std::invalid_argument for non-centered params and
 * PrecisionGuardError when 2 lambda T >= 37.
 */
double expected_occupation_direct(const OUParams& params, const ObservationWindow& window,
                                  const AnalyticConfig& config = {});

/// The same expectation assembled from two split-scheme integrals; infinite
/// endpoints contribute +-T directly.
double expected_occupation_split(const OUParams& params, const ObservationWindow& window,
                                 const AnalyticConfig& config = {});

}  // namespace ouocc
