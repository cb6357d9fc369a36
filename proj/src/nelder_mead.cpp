#include "ouocc/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ouocc {

namespace {

struct Vertex {
    Point2 x;
    double f;
};

Point2 along(const Point2& from, const Point2& to, double t) {
    return {from[0] + t * (to[0] - from[0]), from[1] + t * (to[1] - from[1])};
}

}  // namespace

void OptimizerConfig::validate() const {
    if (!(tol > 0.0))
        throw std::invalid_argument("optimizer tolerance must be positive");
    if (max_iters == 0)
        throw std::invalid_argument("optimizer needs max_iters > 0");
    if (!(initial_scale > 0.0))
        throw std::invalid_argument("initial simplex scale must be positive");
    if (!std::isfinite(initial_point[0]) || !std::isfinite(initial_point[1]))
        throw std::invalid_argument("initial point must be finite");
}

SimplexResult nelder_mead_minimize(const std::function<double(const Point2&)>& objective,
                                   const OptimizerConfig& config) {
    config.validate();
    SimplexResult result;
    auto eval = [&](const Point2& x) {
        ++result.evaluations;
        return objective(x);
    };

    std::array<Vertex, 3> simplex;
    simplex[0] = {config.initial_point, eval(config.initial_point)};
    for (std::size_t i = 0; i < 2; ++i) {
        Point2 x = config.initial_point;
        x[i] += config.initial_scale;
        simplex[i + 1] = {x, eval(x)};
    }
    auto order = [&] {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Vertex& l, const Vertex& r) { return l.f < r.f; });
    };
    auto converged = [&] {
        double spread = 0.0;
        double diameter = 0.0;
        for (std::size_t i = 1; i < simplex.size(); ++i) {
            spread = std::max(spread, std::abs(simplex[i].f - simplex[0].f));
            for (std::size_t k = 0; k < 2; ++k)
                diameter = std::max(diameter, std::abs(simplex[i].x[k] - simplex[0].x[k]));
        }
        return spread <= config.tol && diameter <= config.tol;
    };
    order();

    while (!(result.converged = converged()) && result.iterations < config.max_iters) {
        ++result.iterations;
        Vertex& worst = simplex[2];
        const Point2 centroid{0.5 * (simplex[0].x[0] + simplex[1].x[0]),
                              0.5 * (simplex[0].x[1] + simplex[1].x[1])};

        const Point2 xr = along(worst.x, centroid, 2.0);
        const double fr = eval(xr);
        bool shrink = false;
        if (fr < simplex[0].f) {
            const Point2 xe = along(worst.x, centroid, 3.0);
            const double fe = eval(xe);
            worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr < simplex[1].f) {
            worst = {xr, fr};
        } else if (fr < worst.f) {
            // outside contraction
            const Point2 xc = along(centroid, xr, 0.5);
            const double fc = eval(xc);
            if (fc <= fr)
                worst = {xc, fc};
            else
                shrink = true;
        } else {
            // inside contraction
            const Point2 xcc = along(centroid, worst.x, 0.5);
            const double fcc = eval(xcc);
            if (fcc < worst.f)
                worst = {xcc, fcc};
            else
                shrink = true;
        }
        if (shrink) {
            for (std::size_t i = 1; i < simplex.size(); ++i) {
                simplex[i].x = along(simplex[0].x, simplex[i].x, 0.5);
                simplex[i].f = eval(simplex[i].x);
            }
        }
        order();
        if (config.keep_trace)
            result.trace.push_back({simplex[0].x, simplex[0].f});
    }

    result.point = simplex[0].x;
    result.value = simplex[0].f;
    return result;
}

}  // namespace ouocc
