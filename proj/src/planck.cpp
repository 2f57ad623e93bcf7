#include "hbarlab/planck.hpp"

#include <cmath>
#include <stdexcept>

namespace hbarlab {

double fibonacci_lambda(double hbar) {
    if (hbar <= 0.0) throw std::invalid_argument("fibonacci_lambda: hbar must be positive");
    return 2.0 * hbar / (-1.0 + std::sqrt(5.0 + 4.0 * hbar * hbar));
}

AreaProfile builtin_profile(const std::string& name) {
    AreaProfile p;
    p.name = name;
    auto reciprocal = [](double c) {
        return AreaComponent{[c](double h) { return c / h; },
                             [c](double h) { return -c / (h * h); }};
    };
    if (name == "single-sphere") {
        p.components.push_back(reciprocal(1.0));
        return p;
    }
    if (name == "fibonacci") {
        p.components.push_back(reciprocal(1.0));
        // 1/lambda = (-1 + sqrt(5 + 4 h^2)) / (2 h)
        p.components.push_back(AreaComponent{
            [](double h) { return 1.0 / fibonacci_lambda(h); },
            [](double h) {
                const double s = std::sqrt(5.0 + 4.0 * h * h);
                return (4.0 * h * h / s - s + 1.0) / (2.0 * h * h);
            }});
        return p;
    }
    if (name == "golden-linear") {
        const double phi = 0.5 * (1.0 + std::sqrt(5.0));
        p.components.push_back(reciprocal(1.0));
        p.components.push_back(reciprocal(phi));
        return p;
    }
    throw std::invalid_argument("builtin_profile: unknown profile '" + name + "'");
}

namespace {

double component_deriv(const AreaComponent& c, double h) {
    if (c.deriv) return c.deriv(h);
    const double step = 1e-5 * h;
    return (c.value(h + step) - c.value(h - step)) / (2.0 * step);
}

}  // namespace

PlanckSet bohr_sommerfeld_set(const AreaProfile& profile, double min_hbar) {
    if (profile.components.empty())
        throw std::invalid_argument("bohr_sommerfeld_set: profile has no components");
    if (!(min_hbar > 0.0) || min_hbar >= profile.hbar_max)
        throw std::invalid_argument("bohr_sommerfeld_set: need 0 < min_hbar < hbar_max");
    const auto& a1 = profile.components[0];

    // the leading component must be strictly monotone on the scan range
    const int probe = 256;
    double prev = a1.value(min_hbar);
    int sign = 0;
    for (int i = 1; i <= probe; ++i) {
        const double h = min_hbar + (profile.hbar_max - min_hbar) * i / probe;
        const double v = a1.value(h);
        const int s = (v > prev) - (v < prev);
        if (s == 0 || (sign != 0 && s != sign))
            throw std::invalid_argument(
                "bohr_sommerfeld_set: leading component must be strictly monotone on the range");
        sign = s;
        prev = v;
    }

    const bool decreasing = sign < 0;  // A_1 decreasing in hbar (the usual case)
    const double va = a1.value(min_hbar), vb = a1.value(profile.hbar_max);
    const double vmin = std::min(va, vb), vmax = std::max(va, vb);
    const std::int64_t n_lo = static_cast<std::int64_t>(std::ceil(vmin - 1e-12));
    const std::int64_t n_hi = static_cast<std::int64_t>(std::floor(vmax + 1e-12));

    PlanckSet set;
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        if (n <= 0) continue;
        // bisection for a1(h) = n
        double lo = min_hbar, hi = profile.hbar_max;
        auto f = [&](double h) { return a1.value(h) - static_cast<double>(n); };
        double flo = f(lo), fhi = f(hi);
        if (flo == 0.0)
            hi = lo;
        else if (fhi == 0.0)
            lo = hi;
        else if (flo * fhi > 0.0)
            continue;
        while (hi - lo > 1e-14) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if (fm == 0.0) {
                lo = hi = mid;
            } else if (fm * flo < 0.0) {
                hi = mid;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        const double h = 0.5 * (lo + hi);

        PlanckEntry entry;
        entry.hbar = h;
        bool ok = true;
        for (const auto& comp : profile.components) {
            const double v = comp.value(h);
            const double rounded = std::round(v);
            if (std::abs(v - rounded) > 1e-10 || rounded < 1.0) {
                ok = false;
                break;
            }
            entry.integers.push_back(static_cast<std::int64_t>(rounded));
            entry.size *= static_cast<std::int64_t>(rounded);
        }
        if (ok) set.entries.push_back(std::move(entry));
    }
    if (decreasing) {
        // integer levels were scanned ascending, so hbar came out descending already
    } else {
        std::reverse(set.entries.begin(), set.entries.end());
    }
    // enforce strictly decreasing hbar regardless of scan direction
    std::sort(set.entries.begin(), set.entries.end(),
              [](const PlanckEntry& a, const PlanckEntry& b) { return a.hbar > b.hbar; });
    return set;
}

std::vector<std::pair<double, std::int64_t>> matrix_sizes(const PlanckSet& set) {
    if (set.entries.empty()) throw std::invalid_argument("matrix_sizes: empty Planck set");
    std::vector<std::pair<double, std::int64_t>> out;
    for (const auto& e : set.entries) {
        if (e.integers.empty())
            throw std::invalid_argument("matrix_sizes: entry with no component integers");
        out.emplace_back(e.hbar, e.size);
    }
    return out;
}

const char* verdict_name(IntegrabilityVerdict v) {
    switch (v) {
        case IntegrabilityVerdict::IntegrableCompatible: return "integrable-compatible";
        case IntegrabilityVerdict::Nonintegrable: return "nonintegrable";
        default: return "indeterminate";
    }
}

IntegrabilityReport monodromy_ratio_report(const AreaProfile& profile, const GridSpec& grid) {
    if (profile.components.empty() || grid.n < 2)
        throw std::invalid_argument("monodromy_ratio_report: empty profile or degenerate grid");
    if (grid.lo <= 0.0 || grid.hi > profile.hbar_max || grid.lo >= grid.hi)
        throw std::invalid_argument("monodromy_ratio_report: grid outside validity range");
    IntegrabilityReport rep;
    const int m = static_cast<int>(profile.components.size());
    std::vector<std::vector<double>> derivs(m);
    std::vector<double> hs(grid.n);
    for (int g = 0; g < grid.n; ++g) {
        hs[g] = grid.lo + (grid.hi - grid.lo) * g / (grid.n - 1);
        for (int i = 0; i < m; ++i)
            derivs[i].push_back(component_deriv(profile.components[i], hs[g]));
    }

    // finite-difference noise floor where no closed-form derivative exists
    bool noisy = false;
    for (int i = 0; i < m; ++i) {
        if (profile.components[i].deriv) continue;
        for (int g = 0; g < grid.n; g += std::max(1, grid.n / 8)) {
            const double h = hs[g], step = 2e-5 * h;
            const double alt = (profile.components[i].value(h + step) -
                                profile.components[i].value(h - step)) /
                               (2.0 * step);
            if (std::abs(alt - derivs[i][g]) > 1e-7 * std::abs(derivs[i][g])) noisy = true;
        }
    }

    bool varies = false, irrational = false;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            RatioStat st;
            st.i = i;
            st.j = j;
            double mn = std::numeric_limits<double>::infinity(), mx = -mn;
            for (int g = 0; g < grid.n; ++g) {
                const double r = derivs[i][g] / derivs[j][g];
                mn = std::min(mn, r);
                mx = std::max(mx, r);
            }
            st.min_ratio = mn;
            st.max_ratio = mx;
            const double scale = std::max(std::abs(mn), std::abs(mx));
            st.spread = (scale > 0.0) ? (mx - mn) / scale : 0.0;
            st.constant = st.spread < 1e-6;
            if (!st.constant) {
                varies = true;
            } else {
                st.witness = rational_approx(0.5 * (mn + mx), 1000000, 1e-9);
                if (!st.witness) irrational = true;
            }
            rep.ratio_stats.push_back(st);
        }
    }

    // F reconstructed (up to the leading constant) as 1/A_1; monotone
    // increasing iff A_1 is decreasing in hbar
    int fsign = 0;
    for (int g = 0; g < grid.n; ++g) {
        const double fp = -derivs[0][g];  // sign of d(1/A_1)/dh matches -A_1'
        const int s = (fp > 0.0) - (fp < 0.0);
        if (s == 0 || (fsign != 0 && s != fsign)) {
            rep.f_monotone = false;
            break;
        }
        fsign = s;
    }

    if (varies) {
        rep.verdict = IntegrabilityVerdict::Nonintegrable;
        rep.failing_clause = "monodromy ratio varies across the scan grid";
    } else if (irrational) {
        rep.verdict = IntegrabilityVerdict::Nonintegrable;
        rep.failing_clause = "constant monodromy ratio has no rational witness";
    } else if (!rep.f_monotone) {
        rep.verdict = IntegrabilityVerdict::Nonintegrable;
        rep.failing_clause = "reconstructed rescaling function is not monotone";
    } else if (noisy) {
        rep.verdict = IntegrabilityVerdict::Indeterminate;
        rep.failing_clause = "finite-difference derivative noise exceeds the spread tolerance";
    }
    return rep;
}

}  // namespace hbarlab
