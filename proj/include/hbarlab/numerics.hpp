#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hbarlab {

/// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on the
/// Legendre recurrence.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n);

/// Limit of f(h) as h -> 0 from samples at h, h/2, h/4, ... (ratio-2 ladder).
/// Assumes an asymptotic expansion in integer powers of h starting at `order`.
/// Returns the extrapolated value and the magnitude of the last correction.
struct RichardsonResult {
    double value = 0.0;
    double residual = 0.0;
};

RichardsonResult richardson_limit(const std::vector<double>& samples, int order = 1);

/// Least-squares slope of log|y| against log x. Used for fitted convergence
/// orders; returns the slope (decay rates come out negative for decreasing y
/// against increasing x, so callers negate as appropriate).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Best rational p/q with q <= max_den approximating v, by continued
/// fractions. Returns nullopt when no convergent lands within tol.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

std::optional<Rational> rational_approx(double v, std::int64_t max_den, double tol);

/// Central finite differences of a scalar function of one variable.
double central_diff(const std::function<double(double)>& f, double x, double h);

}  // namespace hbarlab
