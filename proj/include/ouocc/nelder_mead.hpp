#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace ouocc {

using Point2 = std::array<double, 2>;

struct OptimizerConfig {
    double tol = 1e-5;          ///< both simplex diameter and value spread must drop below it
    std::size_t max_iters = 2000;
    Point2 initial_point{1.0, 1.0};
    double initial_scale = 0.25;  ///< per-coordinate offset of the initial simplex vertices
    bool keep_trace = false;

    void validate() const;
};

struct SimplexStep {
    Point2 best;
    double value;
};

struct SimplexResult {
    Point2 point{};
    double value = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
    std::vector<SimplexStep> trace;  ///< best vertex after each iteration (if kept)
};

/**
 * Nelder-Mead simplex search in two dimensions.
 *
 * Reflection 1, expansion 2, contraction 1/2, shrink 1/2. The initial
 * simplex is the start point plus initial_scale along each axis. Stops once
 * max |f_i - f_best| <= tol and max ||v_i - v_best||_inf <= tol, or after
 * max_iters iterations (converged = false). The objective must be total.
 */
SimplexResult nelder_mead_minimize(const std::function<double(const Point2&)>& objective,
                                   const OptimizerConfig& config);

}  // namespace ouocc
