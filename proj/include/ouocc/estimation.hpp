#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <string>
#include <vector>

#include "ouocc/analytic.hpp"
#include "ouocc/nelder_mead.hpp"
#include "ouocc/occupation_mc.hpp"

namespace ouocc {

struct Observation {
    ObservationWindow window;
    double g;  ///< observed occupation time, in [0, T]
};

/// Observed occupation times G_ij for windows (T_i, [a_j, b_j]).
class ObservationSet {
public:
    /// Throws std::invalid_argument if empty or if some g lies outside [0, T].
    explicit ObservationSet(std::vector<Observation> entries,
                            std::optional<std::uint64_t> mc_seed = std::nullopt);

    std::span<const Observation> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    /// Fewer data than the two unknowns (lambda, sigma).
    bool underdetermined() const noexcept { return entries_.size() < 2; }

    double max_horizon() const noexcept;

    /// Seed of the Monte-Carlo run that produced the data, if any.
    std::optional<std::uint64_t> mc_seed() const noexcept { return mc_seed_; }

private:
    std::vector<Observation> entries_;
    std::optional<std::uint64_t> mc_seed_;
};

/// How G_{T,[a,b]}(lambda, sigma) is evaluated inside the residual.
enum class ModelEvaluator { split, direct };

/// Base value returned by residual() for infeasible candidates.
inline constexpr double kInfeasiblePenalty = 1e12;

/**
 * Least-squares deviation sum (G_{T,[a,b]}(lambda, sigma) - g)^2.
 *
 * Never throws on the candidate: lambda <= 0, sigma <= 0 or
 * 2 lambda max(T) >= 37 yield kInfeasiblePenalty plus the distance to the
 * feasible region.
 */
double residual(double lambda, double sigma, const ObservationSet& observations,
                const AnalyticConfig& config = {},
                ModelEvaluator model = ModelEvaluator::split);

struct TracePoint {
    double lambda;
    double sigma;
    double residual;
};

struct EstimationResult {
    double lambda_star = 0.0;
    double sigma_star = 0.0;
    double residual = 0.0;  ///< residual(lambda_star, sigma_star) recomputed
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<TracePoint> trace;
    std::string diagnostic;  ///< empty unless something needs the caller's attention
};

/**
 * Fits (lambda, sigma) to the observations with a Nelder-Mead search over
 * (log lambda, log sigma). config.initial_point is given in (lambda, sigma)
 * and must be positive; config.initial_scale applies in log space.
 */
EstimationResult estimate_parameters(const ObservationSet& observations,
                                     const OptimizerConfig& opt_config = {},
                                     const AnalyticConfig& analytic_config = {},
                                     ModelEvaluator model = ModelEvaluator::split);

enum class GenerationMethod { direct, split, monte_carlo };

/// Synthetic observations G_ij for a centered process. Every window is
/// checked against the precision guard before anything is computed.
ObservationSet generate_synthetic_observations(const OUParams& params,
                                               std::span<const ObservationWindow> windows,
                                               GenerationMethod method,
                                               const MCOptions& mc_options = {},
                                               const AnalyticConfig& analytic_config = {});

/// Cartesian product of horizons and intervals, horizons outermost.
std::vector<ObservationWindow> window_grid(std::span<const double> horizons,
                                           std::span<const std::pair<double, double>> intervals);

/// T in {10, 12} times [-h, h] for h in {0.25, 0.5, 0.75, 1.0}.
std::vector<ObservationWindow> reference_windows();

}  // namespace ouocc
