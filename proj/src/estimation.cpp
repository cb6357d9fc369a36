#include "ouocc/estimation.hpp"

#include <algorithm>
#include <array>
#include <utility>
#include <cmath>
#include <stdexcept>

#include "ouocc/errors.hpp"

namespace ouocc {

ObservationSet::ObservationSet(std::vector<Observation> entries,
                               std::optional<std::uint64_t> mc_seed)
    : entries_(std::move(entries)), mc_seed_(mc_seed) {
    if (entries_.empty())
        throw std::invalid_argument("observation set is empty");
    for (const auto& e : entries_)
        if (!(e.g >= 0.0 && e.g <= e.window.t_end()))
            throw std::invalid_argument("observed occupation time outside [0, T]");
}

double ObservationSet::max_horizon() const noexcept {
    double t = 0.0;
    for (const auto& e : entries_)
        t = std::max(t, e.window.t_end());
    return t;
}

double residual(double lambda, double sigma, const ObservationSet& observations,
                const AnalyticConfig& config, ModelEvaluator model) {
    if (!std::isfinite(lambda) || !std::isfinite(sigma))
        return 2.0 * kInfeasiblePenalty;
    if (lambda <= 0.0 || sigma <= 0.0)
        return kInfeasiblePenalty + std::max(0.0, -lambda) + std::max(0.0, -sigma);
    const double excess = 2.0 * lambda * observations.max_horizon() - kPrecisionGuard;
    if (excess >= 0.0)
        return kInfeasiblePenalty + excess;

    const OUParams params(lambda, sigma);
    double sum = 0.0;
    for (const auto& e : observations.entries()) {
        const double model_value = model == ModelEvaluator::split
                                       ? expected_occupation_split(params, e.window, config)
                                       : expected_occupation_direct(params, e.window, config);
        const double diff = model_value - e.g;
        sum += diff * diff;
    }
    return std::isfinite(sum) ? sum : 2.0 * kInfeasiblePenalty;
}

EstimationResult estimate_parameters(const ObservationSet& observations,
                                     const OptimizerConfig& opt_config,
                                     const AnalyticConfig& analytic_config,
                                     ModelEvaluator model) {
    opt_config.validate();
    analytic_config.validate();
    const auto [lambda0, sigma0] = opt_config.initial_point;
    if (!(lambda0 > 0.0) || !(sigma0 > 0.0))
        throw std::invalid_argument("initial (lambda, sigma) must be positive");

    OptimizerConfig log_config = opt_config;
    log_config.initial_point = {std::log(lambda0), std::log(sigma0)};
    auto objective = [&](const Point2& p) {
        return residual(std::exp(p[0]), std::exp(p[1]), observations, analytic_config, model);
    };
    const SimplexResult simplex = nelder_mead_minimize(objective, log_config);

    EstimationResult result;
    result.lambda_star = std::exp(simplex.point[0]);
    result.sigma_star = std::exp(simplex.point[1]);
    result.residual = residual(result.lambda_star, result.sigma_star, observations,
                               analytic_config, model);
    result.iterations = simplex.iterations;
    result.converged = simplex.converged;
    for (const auto& step : simplex.trace)
        result.trace.push_back({std::exp(step.best[0]), std::exp(step.best[1]), step.value});

    if (result.residual >= kInfeasiblePenalty) {
        result.converged = false;
        result.diagnostic = "no feasible candidate found (2*lambda*T < 37 never satisfied)";
    } else if (observations.underdetermined()) {
        result.diagnostic = "underdetermined: fewer observations than unknowns";
    } else if (!result.converged) {
        result.diagnostic = "iteration limit reached before the tolerance was met";
    }
    return result;
}

ObservationSet generate_synthetic_observations(const OUParams& params,
                                               std::span<const ObservationWindow> windows,
                                               GenerationMethod method,
                                               const MCOptions& mc_options,
                                               const AnalyticConfig& analytic_config) {
    if (windows.empty())
        throw std::invalid_argument("no windows given");
    if (!params.centered())
        throw std::invalid_argument("synthetic observations need a centered process");
    analytic_config.validate();
    for (const auto& w : windows)
        check_precision_guard(params.lambda(), w.t_end());

    std::vector<Observation> entries;
    entries.reserve(windows.size());
    std::optional<std::uint64_t> seed;
    switch (method) {
    case GenerationMethod::direct:
        for (const auto& w : windows)
            entries.push_back({w, expected_occupation_direct(params, w, analytic_config)});
        break;
    case GenerationMethod::split:
        for (const auto& w : windows)
            entries.push_back({w, expected_occupation_split(params, w, analytic_config)});
        break;
    case GenerationMethod::monte_carlo: {
        const auto estimates = mc_expected_occupations(params, windows, mc_options);
        for (std::size_t i = 0; i < windows.size(); ++i)
            entries.push_back({windows[i], estimates[i].mean});
        seed = mc_options.seed;
        break;
    }
    }
    return ObservationSet(std::move(entries), seed);
}

std::vector<ObservationWindow> window_grid(std::span<const double> horizons,
                                           std::span<const std::pair<double, double>> intervals) {
    std::vector<ObservationWindow> windows;
    windows.reserve(horizons.size() * intervals.size());
    for (double t : horizons)
        for (const auto& [a, b] : intervals)
            windows.emplace_back(t, a, b);
    return windows;
}

std::vector<ObservationWindow> reference_windows() {
    const std::array<double, 2> horizons{10.0, 12.0};
    const std::array<std::pair<double, double>, 4> intervals{
        {{-0.25, 0.25}, {-0.5, 0.5}, {-0.75, 0.75}, {-1.0, 1.0}}};
    return window_grid(horizons, intervals);
}

}  // namespace ouocc
