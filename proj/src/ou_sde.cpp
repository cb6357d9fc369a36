#include "ouocc/ou_sde.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ouocc {

OUParams::OUParams(double lambda, double sigma, double mu, double u0)
    : lambda_(lambda), sigma_(sigma), mu_(mu), u0_(u0) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("lambda must be positive and finite");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("sigma must be positive and finite");
    if (!std::isfinite(mu) || !std::isfinite(u0))
        throw std::invalid_argument("mu and u0 must be finite");
}

SimulationGrid::SimulationGrid(double t_end, std::size_t steps)
    : t_end_(t_end), steps_(steps), dt_(t_end / static_cast<double>(steps)) {
    if (!(t_end > 0.0) || !std::isfinite(t_end))
        throw std::invalid_argument("t_end must be positive and finite");
    if (steps == 0)
        throw std::invalid_argument("grid needs at least one step");
}

SimulationGrid SimulationGrid::with_step(double t_end, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("dt must be positive and finite");
    if (!(t_end > 0.0) || !std::isfinite(t_end))
        throw std::invalid_argument("t_end must be positive and finite");
    const double ratio = t_end / dt;
    const double steps = std::round(ratio);
    if (steps < 1.0 || std::abs(steps * dt - t_end) > 1e-9 * t_end)
        throw std::invalid_argument("t_end " + std::to_string(t_end) +
                                    " is not a multiple of dt " + std::to_string(dt));
    return SimulationGrid(t_end, static_cast<std::size_t>(steps));
}

std::size_t SimulationGrid::index_of(double t) const {
    const double j = std::round(t / dt_);
    if (j < 0.0 || j > static_cast<double>(steps_) ||
        std::abs(time(static_cast<std::size_t>(j)) - t) > 1e-9 * t_end_)
        throw std::invalid_argument("time " + std::to_string(t) + " is not a grid point");
    return static_cast<std::size_t>(j);
}

void simulate_ou_path_into(const OUParams& params, const SimulationGrid& grid,
                           std::uint64_t seed, std::uint64_t path_index,
                           std::span<double> out) {
    if (out.size() != grid.steps() + 1)
        throw std::invalid_argument("output buffer does not match grid");
    const double sigma = params.sigma();
    simulate_path_into([&params](double, double x) { return params.drift(x); },
                       [sigma](double, double) { return sigma; },
                       params.u0(), grid, seed, path_index, out);
}

SamplePath simulate_ou_path(const OUParams& params, const SimulationGrid& grid,
                            std::uint64_t seed, std::uint64_t path_index) {
    SamplePath path{grid, std::vector<double>(grid.steps() + 1), seed, path_index};
    simulate_ou_path_into(params, grid, seed, path_index, path.values);
    return path;
}

OUMoments ou_moments(const OUParams& params, double t, double tau) {
    if (!(t >= 0.0) || !(tau >= 0.0))
        throw std::invalid_argument("moment times must be nonnegative");
    const double lambda = params.lambda();
    const double decay = std::exp(-lambda * t);
    // (sigma^2 / 2 lambda) (e^{-lambda |t - tau|} - e^{-lambda (t + tau)})
    const double stationary = params.sigma() * params.sigma() / (2.0 * lambda);
    const double cov = stationary * (std::exp(-lambda * std::abs(t - tau)) -
                                     std::exp(-lambda * (t + tau)));
    return {params.u0() * decay + params.mu() * (1.0 - decay), cov};
}

}  // namespace ouocc
