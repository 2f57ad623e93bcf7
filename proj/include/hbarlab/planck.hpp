#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hbarlab/numerics.hpp"

namespace hbarlab {

/// Inverse of the two-sphere-family rescaling: lambda = 2 hbar / (-1 + sqrt(5 + 4 hbar^2)).
double fibonacci_lambda(double hbar);

/// One normalized symplectic-area component A_i(hbar), with an optional
/// closed-form derivative (central differences otherwise).
struct AreaComponent {
    std::function<double(double)> value;
    std::function<double(double)> deriv;  // may be empty
};

struct AreaProfile {
    std::string name;
    std::vector<AreaComponent> components;
    double hbar_max = 1.0;
};

/// Builtin profiles: "single-sphere" (1/h), "fibonacci" (1/h, 1/lambda(h)),
/// "golden-linear" (1/h, phi/h).
AreaProfile builtin_profile(const std::string& name);

struct PlanckEntry {
    double hbar = 0.0;
    std::vector<std::int64_t> integers;
    std::int64_t size = 1;
};

/// Admissible deformation-parameter values, strictly decreasing, with the
/// zero marker kept as a flag rather than a fake entry. Negative mirror
/// values exist by symmetry but are not listed (the polarization is only
/// positive for hbar > 0).
struct PlanckSet {
    std::vector<PlanckEntry> entries;
    bool includes_zero = true;
    bool sign_symmetric = true;
};

/// Scans integer levels of the leading component on [min_hbar, hbar_max]
/// (bisection to 1e-14 in hbar) and keeps the candidates where every other
/// component is within 1e-10 of an integer.
PlanckSet bohr_sommerfeld_set(const AreaProfile& profile, double min_hbar);

std::vector<std::pair<double, std::int64_t>> matrix_sizes(const PlanckSet& set);

struct GridSpec {
    double lo = 0.1;
    double hi = 1.0;
    int n = 64;
};

enum class IntegrabilityVerdict { IntegrableCompatible, Nonintegrable, Indeterminate };

struct RatioStat {
    int i = 0;
    int j = 0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double spread = 0.0;      // relative max-min spread over the grid
    bool constant = false;
    std::optional<Rational> witness;  // continued-fraction witness when constant
};

struct IntegrabilityReport {
    std::vector<RatioStat> ratio_stats;
    bool f_monotone = true;   // reconstructed rescaling 1/A_1 increasing
    IntegrabilityVerdict verdict = IntegrabilityVerdict::IntegrableCompatible;
    std::string failing_clause;  // empty for integrable-compatible
    std::string assumptions = "base manifold assumed simply connected";
};

/// Necessary-condition screening: derivative ratios must be constant with
/// rational values and the reconstructed rescaling function monotone.
IntegrabilityReport monodromy_ratio_report(const AreaProfile& profile, const GridSpec& grid);

const char* verdict_name(IntegrabilityVerdict v);

}  // namespace hbarlab
