#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ouocc/rng.hpp"

namespace ouocc {

/// Parameters of dU = lambda (mu - U) dt + sigma dW, U(0) = u0.
class OUParams {
public:
    /// Throws std::invalid_argument unless lambda > 0 and sigma > 0 (both finite).
    OUParams(double lambda, double sigma, double mu = 0.0, double u0 = 0.0);

    double lambda() const noexcept { return lambda_; }
    double sigma() const noexcept { return sigma_; }
    double mu() const noexcept { return mu_; }
    double u0() const noexcept { return u0_; }

    bool centered() const noexcept { return mu_ == 0.0 && u0_ == 0.0; }

    double drift(double x) const noexcept { return lambda_ * (mu_ - x); }

private:
    double lambda_;
    double sigma_;
    double mu_;
    double u0_;
};

/// Uniform grid tau_j = j * t_end / steps, j = 0..steps.
class SimulationGrid {
public:
    SimulationGrid(double t_end, std::size_t steps);

    /// Grid with step dt; t_end must be an integer multiple of dt within
    /// a relative 1e-9, otherwise std::invalid_argument.
    static SimulationGrid with_step(double t_end, double dt);

    double t_end() const noexcept { return t_end_; }
    std::size_t steps() const noexcept { return steps_; }
    double dt() const noexcept { return dt_; }

    /// time(steps()) == t_end() exactly.
    double time(std::size_t j) const noexcept {
        return j == steps_ ? t_end_ : t_end_ * (static_cast<double>(j) / static_cast<double>(steps_));
    }

    /// Index j with time(j) == t within 1e-9 * t_end(), or std::invalid_argument.
    std::size_t index_of(double t) const;

private:
    double t_end_;
    std::size_t steps_;
    double dt_;
};

struct SamplePath {
    SimulationGrid grid;
    std::vector<double> values;  ///< values[j] approximates X(tau_j); size steps + 1
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
};

/**
 * One Euler-Maruyama step.
 *
 * Coefficients are evaluated at (t_next, x_prev), i.e. the new time and the
 * old state. The usual scheme uses the old time; for autonomous equations
 * such as OU the two coincide.
 */
template <class Drift, class Diffusion>
inline double em_step(double x_prev, double t_next, double dt, double dW,
                      Drift&& drift, Diffusion&& diffusion) {
    return x_prev + drift(t_next, x_prev) * dt + diffusion(t_next, x_prev) * dW;
}

/**
 * Euler-Maruyama solution of dX = f(t, X) dt + g(t, X) dW, X(0) = x0, written
 * into out (size grid.steps() + 1).
 *
 * The Brownian increment of step j (from tau_{j-1} to tau_j) is
 * sqrt(dt) * Z where Z = GaussianStream(seed, path_index).normal(j - 1).
 */
template <class Drift, class Diffusion>
void simulate_path_into(Drift&& drift, Diffusion&& diffusion, double x0,
                        const SimulationGrid& grid, std::uint64_t seed,
                        std::uint64_t path_index, std::span<double> out) {
    const GaussianStream stream(seed, path_index);
    const std::size_t steps = grid.steps();
    const double dt = grid.dt();
    const double sqrt_dt = std::sqrt(dt);
    out[0] = x0;
    double x = x0;
    for (std::size_t j = 1; j <= steps; j += 2) {
        const auto z = stream.normal_pair((j - 1) / 2);
        x = em_step(x, grid.time(j), dt, sqrt_dt * z[0], drift, diffusion);
        out[j] = x;
        if (j + 1 <= steps) {
            x = em_step(x, grid.time(j + 1), dt, sqrt_dt * z[1], drift, diffusion);
            out[j + 1] = x;
        }
    }
}

template <class Drift, class Diffusion>
SamplePath simulate_path(Drift&& drift, Diffusion&& diffusion, double x0,
                         const SimulationGrid& grid, std::uint64_t seed,
                         std::uint64_t path_index = 0) {
    SamplePath path{grid, std::vector<double>(grid.steps() + 1), seed, path_index};
    simulate_path_into(drift, diffusion, x0, grid, seed, path_index, path.values);
    return path;
}

void simulate_ou_path_into(const OUParams& params, const SimulationGrid& grid,
                           std::uint64_t seed, std::uint64_t path_index,
                           std::span<double> out);

SamplePath simulate_ou_path(const OUParams& params, const SimulationGrid& grid,
                            std::uint64_t seed, std::uint64_t path_index = 0);

struct OUMoments {
    double mean_t;     ///< E[U_t]
    double cov_t_tau;  ///< Cov(U_t, U_tau)
};

/// Closed-form mean and covariance of the exact OU process; t, tau >= 0.
OUMoments ou_moments(const OUParams& params, double t, double tau);

}  // namespace ouocc
