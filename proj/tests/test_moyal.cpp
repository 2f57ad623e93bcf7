#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "hbarlab/moyal.hpp"
#include "hbarlab/numerics.hpp"

using namespace hbarlab;

namespace {

ConstantPoissonData kahler_data() {
    ConstantPoissonData data;
    data.n = 2;
    data.Pi = Mat::Zero(2, 2);
    data.Pi(0, 1) = 1.0;
    data.Pi(1, 0) = -1.0;
    data.metric = Mat::Identity(2, 2);
    return data;
}

Mat skew2(double c) {
    Mat Pi = Mat::Zero(2, 2);
    Pi(0, 1) = c;
    Pi(1, 0) = -c;
    return Pi;
}

LatticeFunction gaussian2(int n, double spacing, double width2, double tilt) {
    return LatticeFunction::sample(2, n, spacing, [=](const Vec& y) {
        return Cplx((1.0 + tilt * y[0]) * std::exp(-y.squaredNorm() / width2), 0.0);
    });
}

double sup_diff(const LatticeFunction& a, const LatticeFunction& b) {
    REQUIRE(a.values.size() == b.values.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    return worst;
}

}  // namespace

TEST_CASE("lattice indexing and involution") {
    LatticeFunction f(1, 8, 0.5);
    CHECK(f.coord(4) == 0.0);
    CHECK(f.coord(0) == -2.0);
    f.at(3) = Cplx(1.0, 2.0);
    CHECK(f.get_clamped(3) == Cplx(1.0, 2.0));
    CHECK(f.get_clamped(-1) == Cplx(0.0, 0.0));
    CHECK(f.get_clamped(8) == Cplx(0.0, 0.0));

    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    LatticeFunction a(2, 16, 0.3);
    for (auto& v : a.values) v = Cplx(gauss(rng), gauss(rng));
    const auto astar = involution(a);
    // a^*(y) = conj(a(-y)); the i = 0 faces have no mirror node and drop out
    CHECK(astar.get(5, 11) == std::conj(a.get(16 - 5, 16 - 11)));
    const auto twice = involution(astar);
    double interior = 0.0;
    for (int i = 1; i < 16; ++i)
        for (int j = 1; j < 16; ++j)
            interior = std::max(interior, std::abs(twice.get(i, j) - a.get(i, j)));
    CHECK(interior < 1e-15);
    CHECK(std::abs(twice.get(0, 5)) == 0.0);
}

TEST_CASE("cocycle is a unimodular antisymmetric bicharacter") {
    const Mat Pi = skew2(0.7);
    Vec y(2), yp(2);
    y << 0.4, -1.1;
    yp << 0.9, 0.2;
    const Cplx s = cocycle_sigma(y, yp, 0.3, PolarizationCase::FlatV, Pi);
    CHECK(std::abs(std::abs(s) - 1.0) < 1e-15);
    CHECK(std::abs(s * cocycle_sigma(yp, y, 0.3, PolarizationCase::FlatV, Pi) - 1.0) < 1e-15);
    const Cplx k = cocycle_sigma(y, yp, 0.3, PolarizationCase::Kahler, Pi);
    CHECK(std::abs(k - std::conj(s)) < 1e-15);
    CHECK(std::abs(cocycle_sigma(y, yp, 0.0, PolarizationCase::FlatV, Pi) - 1.0) < 1e-15);
}

TEST_CASE("twisted convolution is associative") {
    const Mat Pi = skew2(0.7);
    // widths chosen so repeated convolutions still decay below the grid edge
    const auto a = gaussian2(40, 0.5, 1.2, 0.3);
    const auto b = gaussian2(40, 0.5, 1.5, -0.2);
    const auto c = gaussian2(40, 0.5, 1.0, 0.1);
    const double hbar = 0.7;
    const auto ab_c = twisted_convolution(twisted_convolution(a, b, hbar, Pi), c, hbar, Pi);
    const auto a_bc = twisted_convolution(a, twisted_convolution(b, c, hbar, Pi), hbar, Pi);
    CHECK(sup_diff(ab_c, a_bc) < 1e-7);

    LatticeFunction wrong(2, 16, 0.5);
    CHECK_THROWS(twisted_convolution(a, wrong, hbar, Pi));
}

TEST_CASE("at hbar = 0 the transform turns products into convolutions") {
    const int n = 64;
    const double h = 0.3;
    const auto f = LatticeFunction::sample(2, n, h, [](const Vec& x) {
        return Cplx(std::exp(-x.squaredNorm() / 4.0), 0.0);
    });
    const auto g = LatticeFunction::sample(2, n, h, [](const Vec& x) {
        return Cplx(x[0] * std::exp(-x.squaredNorm() / 4.0), 0.0);
    });
    LatticeFunction fg(2, n, h);
    for (int i = 0; i < (int)fg.values.size(); ++i) fg.values[i] = f.values[i] * g.values[i];

    const auto Ff = weyl_quantize(f, 0.0);
    const auto Fg = weyl_quantize(g, 0.0);
    const auto Ffg = weyl_quantize(fg, 0.0);
    const auto conv = twisted_convolution(Ff, Fg, 0.0, skew2(1.0));
    CHECK(sup_diff(Ffg, conv) < 1e-8);
}

TEST_CASE("transform round trip") {
    const int n = 48;
    const double h = 0.35;
    const auto f = LatticeFunction::sample(2, n, h, [](const Vec& x) {
        return Cplx(std::exp(-x.squaredNorm() / 4.0), 0.2 * x[1] * std::exp(-x.squaredNorm() / 3.0));
    });
    const auto back = weyl_dequantize(weyl_quantize(f, 0.1), n, h);
    CHECK(sup_diff(back, f) < 1e-10);
}

TEST_CASE("commutator defect against the bracket decays faster than hbar^1.8") {
    const Mat Pi = skew2(1.0);
    const int n = 48;
    const double h = 0.4;
    const auto f = LatticeFunction::sample(2, n, h, [](const Vec& x) {
        return Cplx(std::exp(-x.squaredNorm() / 4.0), 0.0);
    });
    const auto g = LatticeFunction::sample(2, n, h, [](const Vec& x) {
        return Cplx(x[0] * std::exp(-x.squaredNorm() / 4.0), 0.0);
    });
    std::vector<double> hbars{0.4, 0.2, 0.1};
    std::vector<double> defects;
    for (double hb : hbars) defects.push_back(dirac_defect(f, g, hb, Pi));
    const double slope = fit_loglog_slope(hbars, defects);
    INFO("defects ", defects[0], " ", defects[1], " ", defects[2]);
    CHECK(slope > 1.8);
}

TEST_CASE("bracket of lattice functions matches the closed form") {
    const Mat Pi = skew2(1.0);
    const int n = 48;
    const double h = 0.4;
    const auto f = LatticeFunction::sample(2, n, h, [](const Vec& x) {
        return Cplx(std::exp(-x.squaredNorm() / 4.0), 0.0);
    });
    const auto g = LatticeFunction::sample(2, n, h, [](const Vec& x) {
        return Cplx(x[1] * std::exp(-x.squaredNorm() / 4.0), 0.0);
    });
    const auto br = poisson_bracket(f, g, Pi);
    // {f, g} with Pi(df, dg) = df^T Pi dg for f = e^{-|x|^2/4}, g = x2 f
    double worst = 0.0;
    for (int i = 8; i < n - 8; ++i)
        for (int j = 8; j < n - 8; ++j) {
            const double x1 = br.coord(i), x2 = br.coord(j);
            const double e = std::exp(-(x1 * x1 + x2 * x2) / 4.0);
            const double fx1 = -0.5 * x1 * e;
            const double fx2 = -0.5 * x2 * e;
            const double gx1 = x2 * fx1;
            const double gx2 = e + x2 * fx2;
            const double expected = fx1 * gx2 - fx2 * gx1;
            worst = std::max(worst, std::abs(br.get(i, j) - Cplx(expected, 0.0)));
        }
    CHECK(worst < 1e-7);
}

TEST_CASE("half-form factor of the standard structure") {
    const auto data = kahler_data();
    const auto eps = kahler_epsilon(data);
    CHECK(eps.m == 1);
    CHECK(eps.eps == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-14));
}

TEST_CASE("unit multiplier is idempotent under the product") {
    const auto data = kahler_data();
    for (double hbar : {0.5, 1.0, 2.0}) {
        const double extent = 6.0 * std::sqrt(2.0 / hbar);
        const auto K = unit_multiplier(hbar, data, 64, extent);
        const auto KK = kahler_product(K, K, data);
        CHECK(sup_diff(KK.y_values, K.y_values) < 1e-6);
    }

    const auto K = unit_multiplier(0.5, data, 32, 10.0);
    auto Kneg = K;
    Kneg.hbar = -0.5;
    CHECK_THROWS(kahler_product(Kneg, Kneg, data));
    const auto K2 = unit_multiplier(1.0, data, 32, 10.0);
    CHECK_THROWS(kahler_product(K, K2, data));
}

TEST_CASE("classical-limit evaluation of the unit family") {
    const auto data = kahler_data();
    std::vector<MoyalElement> family;
    for (double hbar : {0.2, 0.1, 0.05}) family.push_back(unit_multiplier(hbar, data, 64, 16.0));
    Vec x = Vec::Zero(2), y = Vec::Zero(2);
    const auto at0 = ev0(family, data, x, y);
    CHECK(std::abs(at0.value - Cplx(1.0, 0.0)) < 1e-3);
    y << 1.3, -0.7;
    const auto off = ev0(family, data, x, y);
    CHECK(std::abs(off.value - Cplx(1.0, 0.0)) < 1e-3);

    // a family that blows up in the scaled limit is rejected
    std::vector<MoyalElement> bad;
    for (double hbar : {0.2, 0.1, 0.05}) {
        MoyalElement e;
        e.hbar = hbar;
        e.translation_invariant = true;
        e.y_values = LatticeFunction::sample(2, 16, 1.0, [hbar](const Vec&) {
            return Cplx(1.0 / hbar, 0.0);
        });
        bad.push_back(e);
    }
    CHECK_THROWS(ev0(bad, data, x, y));

    // the hbar list must halve
    std::vector<MoyalElement> uneven;
    for (double hbar : {0.2, 0.1, 0.07}) uneven.push_back(unit_multiplier(hbar, data, 16, 8.0));
    CHECK_THROWS(ev0(uneven, data, x, y));
}
