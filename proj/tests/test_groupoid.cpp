#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hbarlab/groupoid.hpp"

using namespace hbarlab;

namespace {

ConstantPoissonData standard_data() {
    ConstantPoissonData data;
    data.n = 2;
    data.Pi = Mat::Zero(2, 2);
    data.Pi(0, 1) = 1.0;
    data.Pi(1, 0) = -1.0;
    return data;
}

ConstantPoissonData skew_data() {
    // non-degenerate but not the standard block, to catch Pi-dependence bugs
    ConstantPoissonData data;
    data.n = 2;
    data.Pi = Mat::Zero(2, 2);
    data.Pi(0, 1) = 0.7;
    data.Pi(1, 0) = -0.7;
    return data;
}

}  // namespace

TEST_CASE("groupoid axioms hold pointwise, including the hbar = 0 slice") {
    std::mt19937_64 rng(101);
    for (const auto& data : {standard_data(), skew_data()}) {
        const auto model = constant_pi_model(data);
        const auto rep = check_axioms(model, 10000, 1e-12, rng);
        INFO("worst residual ", rep.max_residual());
        CHECK(rep.pass);
    }
}

TEST_CASE("pair groupoid axioms") {
    std::mt19937_64 rng(7);
    const auto model = pair_groupoid_model(3);
    const auto rep = check_axioms(model, 5000, 1e-12, rng, false);
    CHECK(rep.pass);
}

TEST_CASE("symplectic form: closed, multiplicative, unimodular") {
    std::mt19937_64 rng(23);
    const auto data = standard_data();
    const auto model = constant_pi_model(data);
    const auto omega = constant_pi_symplectic_form(data.n);
    const auto rep = check_forms(model, omega, 200, 1e-9, rng);
    CHECK(rep.closedness < 1e-9);
    CHECK(rep.multiplicativity < 1e-9);
    CHECK_FALSE(rep.degenerate);
    CHECK(std::abs(rep.min_abs_det - 1.0) < 1e-12);
}

TEST_CASE("coboundary of hbar*z is the pairing cocycle") {
    std::mt19937_64 rng(31);
    const auto data = skew_data();
    const int n = data.n;
    const auto model = constant_pi_model(data);
    auto f = [n](const Vec& g) { return g[2 * n + 1] * g[2 * n]; };
    double worst = 0.0;
    for (int s = 0; s < 500; ++s) {
        const Vec p = model.sample_pair(rng);
        const double hbar = p[3 * n + 2];
        const Vec y = p.segment(n, n);
        const Vec yp = p.segment(2 * n, n);
        const double expected = 0.5 * hbar * data.pairing(y, yp);
        worst = std::max(worst, std::abs(coboundary(model, f, p) - expected));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("contact form is multiplicative") {
    std::mt19937_64 rng(41);
    const auto data = standard_data();
    const auto model = constant_pi_model(data);
    const auto theta = constant_pi_contact_form(data.n);
    double worst = 0.0;
    for (int s = 0; s < 200; ++s) {
        const Vec p = model.sample_pair(rng);
        worst = std::max(worst, coboundary_form(model, theta, p).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("target map is Poisson for the induced base bracket") {
    std::mt19937_64 rng(53);
    const auto data = standard_data();
    const int n = data.n;
    const auto model = constant_pi_model(data);
    const auto omega = constant_pi_symplectic_form(n);

    auto f1 = [](const Vec& b) { return b[0]; };
    auto g1 = [](const Vec& b) { return b[1]; };
    auto bracket1 = [n](const Vec& b) { return -b[n] * 1.0; };
    CHECK(check_target_poisson(model, omega, f1, g1, bracket1, 200, rng) < 1e-6);

    auto f2 = [](const Vec& b) { return b[0] * b[0]; };
    auto g2 = [](const Vec& b) { return b[0] * b[1]; };
    auto bracket2 = [n](const Vec& b) { return -b[n] * 2.0 * b[0] * b[0]; };
    CHECK(check_target_poisson(model, omega, f2, g2, bracket2, 200, rng) < 1e-6);
}

TEST_CASE("rescaled su(2) family and its contraction") {
    const auto c = su2_bracket_family(0.5);
    CHECK(c[0][1][2] == 1.0);
    CHECK(c[1][0][2] == -1.0);
    CHECK(c[1][2][0] == doctest::Approx(0.25));
    CHECK(c[2][0][1] == doctest::Approx(0.25));
    for (double hbar : {0.0, 0.1, 0.5, 1.0, 2.0})
        CHECK(jacobi_residual(su2_bracket_family(hbar)) < 1e-12);
    // hbar = 0 is the Heisenberg contraction: [Y,Z] and [Z,X] vanish
    const auto c0 = su2_bracket_family(0.0);
    CHECK(c0[1][2][0] == 0.0);
    CHECK(c0[2][0][1] == 0.0);
    CHECK(c0[0][1][2] == 1.0);
}
