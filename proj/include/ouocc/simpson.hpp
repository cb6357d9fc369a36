#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace ouocc {

/// Composite Simpson rule with n (even) panels on [a, b].
template <class F>
double composite_simpson(F&& f, double a, double b, std::size_t n) {
    if (n == 0 || n % 2 != 0)
        throw std::invalid_argument("composite Simpson needs an even panel count");
    const double h = (b - a) / static_cast<double>(n);
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double x = a + h * static_cast<double>(i);
        (i % 2 != 0 ? odd : even) += f(x);
    }
    return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

namespace detail {

template <class F>
double simpson_recurse(F& f, double a, double b, double fa, double fm, double fb,
                       double whole, double abs_tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * abs_tol)
        return left + right + delta / 15.0;
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson on [a, b] to absolute tolerance abs_tol (Richardson
/// corrected), bisecting at most max_depth times along any branch.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol, int max_depth = 50) {
    if (a == b)
        return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_recurse(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

}  // namespace ouocc
