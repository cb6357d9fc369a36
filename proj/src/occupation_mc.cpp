#include "ouocc/occupation_mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace ouocc {

ObservationWindow::ObservationWindow(double t_end, double a, double b)
    : t_end_(t_end), a_(a), b_(b) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (!(t_end > 0.0) || !std::isfinite(t_end))
        throw std::invalid_argument("window horizon must be positive and finite");
    if (std::isnan(a) || std::isnan(b))
        throw std::invalid_argument("window endpoints must not be NaN");
    if (a == inf || b == -inf)
        throw std::invalid_argument("window endpoints out of range");
    if (!(a <= b))
        throw std::invalid_argument("window requires a <= b");
}

namespace {

std::size_t window_steps(const SimulationGrid& grid, double t_end) {
    if (t_end > grid.t_end() * (1.0 + 1e-9))
        throw std::invalid_argument("window longer than path");
    return grid.index_of(t_end);
}

// Indicator sum over values[0..steps] in half-step units.
template <class Inside>
std::size_t half_counts(std::span<const double> values, std::size_t steps, CountingRule rule,
                        Inside&& inside) {
    const auto interior = values.subspan(1, steps - 1);
    const auto n = static_cast<std::size_t>(std::count_if(interior.begin(), interior.end(), inside));
    const std::size_t first = inside(values[0]) ? 1 : 0;
    if (rule == CountingRule::left_endpoint)
        return 2 * (n + first);
    return 2 * n + first + (inside(values[steps]) ? 1 : 0);
}

// half / (2 steps) is exactly 1 when every point is inside, so a path that
// never leaves returns T itself rather than steps * dt.
double scaled(std::size_t half, std::size_t steps, double t_end) {
    return t_end * (static_cast<double>(half) / static_cast<double>(2 * steps));
}

// Welford accumulation in index order; identical inputs give identical bits.
MCEstimate summarize(std::span<const double> samples, std::uint64_t seed) {
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    for (double x : samples) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }
    const double variance = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    return {mean, std::sqrt(variance / static_cast<double>(n)), n, seed};
}

}  // namespace

double sample_occupation_time(const SamplePath& path, const ObservationWindow& window,
                              CountingRule rule) {
    const std::size_t steps = window_steps(path.grid, window.t_end());
    const auto half = half_counts(path.values, steps, rule,
                                  [&window](double x) { return window.contains(x); });
    return scaled(half, steps, window.t_end());
}

double sample_occupation_time_half_open(const SamplePath& path, const ObservationWindow& window,
                                        CountingRule rule) {
    const std::size_t steps = window_steps(path.grid, window.t_end());
    const double a = window.a();
    const double b = window.b();
    const auto half = half_counts(path.values, steps, rule,
                                  [a, b](double x) { return a <= x && x < b; });
    return scaled(half, steps, window.t_end());
}

std::vector<MCEstimate> mc_expected_occupations(const OUParams& params,
                                                std::span<const ObservationWindow> windows,
                                                const MCOptions& options) {
    if (windows.empty())
        throw std::invalid_argument("no windows given");
    if (options.n_samples < 2)
        throw std::invalid_argument("Monte-Carlo needs at least two samples");
    double horizon = 0.0;
    for (const auto& w : windows)
        horizon = std::max(horizon, w.t_end());
    const SimulationGrid grid = SimulationGrid::with_step(horizon, options.dt);

    std::vector<std::size_t> steps;
    steps.reserve(windows.size());
    for (const auto& w : windows)
        steps.push_back(window_steps(grid, w.t_end()));

    const std::size_t n = options.n_samples;
    std::vector<double> occupation(windows.size() * n);

    auto run_range = [&](std::size_t begin, std::size_t end) {
        std::vector<double> values(grid.steps() + 1);
        for (std::size_t path = begin; path < end; ++path) {
            simulate_ou_path_into(params, grid, options.seed, path, values);
            for (std::size_t w = 0; w < windows.size(); ++w) {
                const auto& win = windows[w];
                const auto half = half_counts(values, steps[w], options.rule,
                                              [&win](double x) { return win.contains(x); });
                occupation[w * n + path] = scaled(half, steps[w], win.t_end());
            }
        }
    };

    unsigned workers = options.workers != 0 ? options.workers : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
    if (workers == 1) {
        run_range(0, n);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned k = 0; k < workers; ++k) {
            const std::size_t begin = std::min(n, k * chunk);
            const std::size_t end = std::min(n, begin + chunk);
            pool.emplace_back(run_range, begin, end);
        }
    }

    std::vector<MCEstimate> estimates;
    estimates.reserve(windows.size());
    for (std::size_t w = 0; w < windows.size(); ++w)
        estimates.push_back(summarize(std::span<const double>(occupation).subspan(w * n, n),
                                      options.seed));
    return estimates;
}

MCEstimate mc_expected_occupation(const OUParams& params, const ObservationWindow& window,
                                  const MCOptions& options) {
    return mc_expected_occupations(params, std::span(&window, 1), options).front();
}

}  // namespace ouocc
