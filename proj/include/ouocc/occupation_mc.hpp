#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ouocc/ou_sde.hpp"

namespace ouocc {

/// Time horizon T and spatial interval [a, b]; a may be -inf and b +inf.
class ObservationWindow {
public:
    /// Throws std::invalid_argument unless T > 0 is finite, neither endpoint
    /// is NaN, a <= b, a != +inf and b != -inf.
    ObservationWindow(double t_end, double a, double b);

    double t_end() const noexcept { return t_end_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }

    bool contains(double x) const noexcept { return a_ <= x && x <= b_; }

    friend bool operator==(const ObservationWindow&, const ObservationWindow&) = default;

private:
    double t_end_;
    double a_;
    double b_;
};

struct MCEstimate {
    double mean = 0.0;       ///< time units, in [0, T]
    double std_error = 0.0;  ///< sample standard deviation / sqrt(n_samples)
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
};

/// Quadrature of the indicator integral over the sampled path.
enum class CountingRule {
    /// dt * (1(X_0)/2 + 1(X_1) + ... + 1(X_{L'-1}) + 1(X_{L'})/2)
    trapezoid,
    /// dt * (1(X_0) + ... + 1(X_{L'-1})); biased by O(dt) on the decaying
    /// transient of a process started at the origin
    left_endpoint,
};

/**
 * Occupation time of [a, b] by a discrete path over [0, T], with L' = T / dt.
 *
 * The window horizon must be a grid point of the path; a horizon past the
 * end of the path throws std::invalid_argument("window longer than path").
 * A path that stays inside returns T exactly.
 */
double sample_occupation_time(const SamplePath& path, const ObservationWindow& window,
                              CountingRule rule = CountingRule::trapezoid);

/// Same count with the half-open interval [a, b). Occupations of [a, c) and
/// [c, b) add up exactly to the occupation of [a, b).
double sample_occupation_time_half_open(const SamplePath& path, const ObservationWindow& window,
                                        CountingRule rule = CountingRule::trapezoid);

struct MCOptions {
    std::size_t n_samples = 10'000;
    double dt = 1e-2;
    std::uint64_t seed = 0;
    CountingRule rule = CountingRule::trapezoid;
    /// Worker threads; 0 picks std::thread::hardware_concurrency(). Results
    /// do not depend on this value.
    unsigned workers = 0;
};

/// Monte-Carlo estimate of E[M_{T,[a,b]}] from n_samples Euler-Maruyama
/// paths; path i draws its increments from GaussianStream(seed, i).
MCEstimate mc_expected_occupation(const OUParams& params, const ObservationWindow& window,
                                  const MCOptions& options);

/// One estimate per window, all from the same set of paths simulated up to
/// the longest horizon. Every horizon must be a multiple of dt.
std::vector<MCEstimate> mc_expected_occupations(const OUParams& params,
                                                std::span<const ObservationWindow> windows,
                                                const MCOptions& options);

}  // namespace ouocc
