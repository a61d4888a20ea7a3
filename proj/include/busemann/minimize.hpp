#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

namespace busemann {

struct Minimum {
    double arg;
    double value;
};

// Minimizer of a convex f on [lo, hi].  Golden section narrows the bracket,
// then bisection on the sign of df pins the minimizer to a few ulps.
template <class F, class DF>
Minimum minimize_convex(F&& f, DF&& df, double lo, double hi) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    if (b > a) {
        double c = b - invphi * (b - a), d = a + invphi * (b - a);
        double fc = f(c), fd = f(d);
        const double stop = 1e-6 * (hi - lo);
        while (b - a > stop) {
            if (fc <= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - invphi * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + invphi * (b - a);
                fd = f(d);
            }
        }
        // On flat stretches the value comparisons lose the minimizer; widen until df changes sign.
        for (double w = stop; a > lo && df(a) > 0.0; w *= 2.0) a = std::max(lo, a - w);
        for (double w = stop; b < hi && df(b) < 0.0; w *= 2.0) b = std::min(hi, b + w);
    }
    double s;
    if (df(a) >= 0.0) {
        s = a;
    } else if (df(b) <= 0.0) {
        s = b;
    } else {
        for (int i = 0; i < 200 && b - a > 0.0; ++i) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            if (df(m) < 0.0) a = m; else b = m;
        }
        s = (f(a) <= f(b)) ? a : b;
    }
    return {s, f(s)};
}

// Same on [lo, infinity): expands hi until df turns nonnegative.
template <class F, class DF>
Minimum minimize_convex_halfline(F&& f, DF&& df, double lo, double hi0) {
    double hi = std::max(hi0, lo + 1.0);
    for (int i = 0; i < 80 && df(hi) < 0.0; ++i) hi = lo + 2.0 * (hi - lo);
    return minimize_convex(f, df, lo, hi);
}

// Golden section without derivative, for objectives that are only piecewise smooth.
template <class F>
Minimum golden_section(F&& f, double lo, double hi, double rel_tol = 1e-12) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    const double stop = rel_tol * std::max(1.0, std::fabs(hi - lo));
    for (int i = 0; i < 300 && b - a > stop; ++i) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    Minimum best{c, fc};
    if (fd < best.value) best = {d, fd};
    const double fa = f(lo), fb = f(hi);
    if (fa < best.value) best = {lo, fa};
    if (fb < best.value) best = {hi, fb};
    return best;
}

}  // namespace busemann
