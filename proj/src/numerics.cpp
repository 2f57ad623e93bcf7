#include "hbarlab/numerics.hpp"

#include <algorithm>
#include <numbers>

namespace hbarlab {

GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussLegendre q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[i] = -x;
        q.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.weights[i] = w;
        q.weights[n - 1 - i] = w;
    }
    return q;
}

RichardsonResult richardson_limit(const std::vector<double>& samples, int order) {
    if (samples.empty()) throw std::invalid_argument("richardson_limit: no samples");
    std::vector<double> row = samples;
    double last_correction = 0.0;
    for (std::size_t level = 1; level < samples.size(); ++level) {
        const double factor = std::pow(2.0, static_cast<double>(order + level - 1));
        std::vector<double> next(row.size() - 1);
        for (std::size_t i = 0; i + 1 < row.size(); ++i)
            next[i] = (factor * row[i + 1] - row[i]) / (factor - 1.0);
        last_correction = std::abs(next.back() - row.back());
        row = std::move(next);
    }
    return {row.back(), last_correction};
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_loglog_slope: need >= 2 matched points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0 || std::abs(y[i]) <= 0.0) continue;
        const double lx = std::log(x[i]);
        const double ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("fit_loglog_slope: degenerate data");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::optional<Rational> rational_approx(double v, std::int64_t max_den, double tol) {
    // Continued-fraction convergents p_k/q_k. A convergent is accepted only
    // when the expansion effectively terminates there: the next partial
    // quotient would push the denominator past max_den. Merely landing
    // within tol is not enough -- irrational numbers with slowly growing
    // quotients (e.g. the golden ratio) have convergents of deceptive
    // accuracy at large denominators.
    double x = v;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;  // h_{-2}/k_{-2}, h_{-1}/k_{-1}
    for (int it = 0; it < 64; ++it) {
        const double fl = std::floor(x);
        if (fl > 9e17 || fl < -9e17) break;
        const auto a = static_cast<std::int64_t>(fl);
        const std::int64_t p2 = a * p1 + p0;
        const std::int64_t q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double err = std::abs(v - static_cast<double>(p1) / static_cast<double>(q1));
        const double frac = x - fl;
        if (frac < 1e-15 * std::max(1.0, std::abs(fl)))
            return (err < tol) ? std::optional<Rational>{Rational{p1, q1}} : std::nullopt;
        x = 1.0 / frac;
        if (err < tol && std::floor(x) * static_cast<double>(q1) > static_cast<double>(max_den))
            return Rational{p1, q1};
    }
    return std::nullopt;
}

double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace hbarlab
