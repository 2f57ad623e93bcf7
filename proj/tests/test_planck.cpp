#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "hbarlab/planck.hpp"

using namespace hbarlab;

namespace {

bool perfect_square(std::int64_t v) {
    const auto r = (std::int64_t)std::llround(std::sqrt((double)v));
    return r * r == v;
}

}  // namespace

TEST_CASE("two-sphere rescaling closed form") {
    // lambda solves lambda - hbar lambda^2 = hbar, lambda(0+) -> ... and 1/lambda
    // at hbar = 1/F_{2k} lands on F_{2k-1}/F_{2k} denominator structure
    CHECK(fibonacci_lambda(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    // u = 1/lambda and v = 1/hbar satisfy u^2 + u v - v^2 = 1
    const double h = 0.37;
    const double u = 1.0 / fibonacci_lambda(h);
    const double v = 1.0 / h;
    CHECK(u * u + u * v - v * v == doctest::Approx(1.0).epsilon(1e-12));

    // Fibonacci oracle: 1/hbar = F_{2k} iff 1/lambda is the integer F_{2k-1},
    // equivalently 5 F^2 + 4 is a perfect square
    std::int64_t f_prev = 1, f_cur = 1;  // F_1, F_2
    for (int step = 0; step < 20; ++step) {
        const std::int64_t f_next = f_prev + f_cur;
        f_prev = f_cur;
        f_cur = f_next;
    }
    // regenerate and walk the even-indexed entries
    std::int64_t a = 1, b = 1;  // F_1, F_2
    for (int idx = 2; idx <= 22; ++idx) {
        if (idx % 2 == 0) {
            CHECK(perfect_square(5 * b * b + 4));
            const double inv_lam = 1.0 / fibonacci_lambda(1.0 / (double)b);
            CHECK(inv_lam == doctest::Approx((double)a).epsilon(1e-9));
        }
        const std::int64_t c = a + b;
        a = b;
        b = c;
    }
    // odd-indexed Fibonacci numbers (other than 1) fail the square test
    CHECK_FALSE(perfect_square(5 * 5 * 5 + 4));     // F = 5
    CHECK_FALSE(perfect_square(5 * 13 * 13 + 4));   // F = 13
}

TEST_CASE("single-sphere admissible set is 1/N") {
    const auto set = bohr_sommerfeld_set(builtin_profile("single-sphere"), 0.095);
    REQUIRE(set.entries.size() == 10);
    CHECK(set.includes_zero);
    CHECK(set.sign_symmetric);
    for (std::size_t i = 0; i < set.entries.size(); ++i) {
        const auto N = (std::int64_t)(i + 1);
        CHECK(std::abs(set.entries[i].hbar - 1.0 / (double)N) < 1e-12);
        REQUIRE(set.entries[i].integers.size() == 1);
        CHECK(set.entries[i].integers[0] == N);
        CHECK(set.entries[i].size == N);
    }
    // strictly decreasing
    for (std::size_t i = 0; i + 1 < set.entries.size(); ++i)
        CHECK(set.entries[i].hbar > set.entries[i + 1].hbar);
}

TEST_CASE("two-sphere family selects even-index Fibonacci reciprocals") {
    const auto set = bohr_sommerfeld_set(builtin_profile("fibonacci"), 0.005);
    REQUIRE(set.entries.size() == 6);
    const std::int64_t f2k[] = {1, 3, 8, 21, 55, 144};
    const std::int64_t f2k1[] = {1, 2, 5, 13, 34, 89};
    for (int i = 0; i < 6; ++i) {
        CHECK(std::abs(set.entries[i].hbar - 1.0 / (double)f2k[i]) < 1e-12);
        REQUIRE(set.entries[i].integers.size() == 2);
        CHECK(set.entries[i].integers[0] == f2k[i]);
        CHECK(set.entries[i].integers[1] == f2k1[i]);
        CHECK(set.entries[i].size == f2k[i] * f2k1[i]);
    }

    const auto sizes = matrix_sizes(set);
    REQUIRE(sizes.size() == 6);
    CHECK(sizes[3].second == 21 * 13);
}

TEST_CASE("incommensurable areas admit no nonzero value") {
    // the golden second component never lands on an integer together with 1/hbar
    const auto set = bohr_sommerfeld_set(builtin_profile("golden-linear"), 0.01);
    CHECK(set.entries.empty());
    CHECK(set.includes_zero);
    CHECK_THROWS(matrix_sizes(set));
}

TEST_CASE("monodromy screening separates the builtin profiles") {
    GridSpec grid;

    const auto fib = monodromy_ratio_report(builtin_profile("fibonacci"), grid);
    CHECK(fib.verdict == IntegrabilityVerdict::Nonintegrable);
    REQUIRE(fib.ratio_stats.size() == 1);
    CHECK_FALSE(fib.ratio_stats[0].constant);
    CHECK(fib.ratio_stats[0].spread > 1e-6);

    const auto gold = monodromy_ratio_report(builtin_profile("golden-linear"), grid);
    CHECK(gold.verdict == IntegrabilityVerdict::Nonintegrable);
    REQUIRE(gold.ratio_stats.size() == 1);
    CHECK(gold.ratio_stats[0].constant);
    CHECK_FALSE(gold.ratio_stats[0].witness.has_value());

    const auto single = monodromy_ratio_report(builtin_profile("single-sphere"), grid);
    CHECK(single.verdict == IntegrabilityVerdict::IntegrableCompatible);
    CHECK(single.f_monotone);
    CHECK(single.failing_clause.empty());
}

TEST_CASE("commensurable profile passes with a rational witness") {
    AreaProfile profile;
    profile.name = "two-three";
    profile.hbar_max = 1.0;
    profile.components.push_back({[](double h) { return 2.0 / h; },
                                  [](double h) { return -2.0 / (h * h); }});
    profile.components.push_back({[](double h) { return 3.0 / h; },
                                  [](double h) { return -3.0 / (h * h); }});
    const auto rep = monodromy_ratio_report(profile, GridSpec{});
    CHECK(rep.verdict == IntegrabilityVerdict::IntegrableCompatible);
    REQUIRE(rep.ratio_stats.size() == 1);
    CHECK(rep.ratio_stats[0].constant);
    REQUIRE(rep.ratio_stats[0].witness.has_value());
    CHECK(rep.ratio_stats[0].witness->num == 2);
    CHECK(rep.ratio_stats[0].witness->den == 3);
    CHECK(rep.f_monotone);
}

TEST_CASE("profiles scaled by a common invertible factor screen identically") {
    // c_i(h)/F(h) with the same invertible F does not change the derivative
    // ratios' constancy or the witness
    AreaProfile profile;
    profile.name = "scaled";
    profile.hbar_max = 1.0;
    auto F = [](double h) { return 1.0 + 0.5 * h; };
    profile.components.push_back({[F](double h) { return 2.0 / (h * F(h)); }, nullptr});
    profile.components.push_back({[F](double h) { return 3.0 / (h * F(h)); }, nullptr});
    const auto rep = monodromy_ratio_report(profile, GridSpec{});
    REQUIRE(rep.ratio_stats.size() == 1);
    CHECK(rep.ratio_stats[0].constant);
    REQUIRE(rep.ratio_stats[0].witness.has_value());
    CHECK(rep.ratio_stats[0].witness->num == 2);
    CHECK(rep.ratio_stats[0].witness->den == 3);
    CHECK(rep.f_monotone);
}
