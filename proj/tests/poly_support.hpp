// Polynomial maps in three variables with exact derivative oracles, shared by
// the exploded-calculus test binaries.
#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "hbarlab/explosion.hpp"

namespace hbarlab_tests {

using hbarlab::CompatibleMap;
using hbarlab::ExplosiveChart;
using hbarlab::Vec;

struct Poly {
    struct Term {
        double c;
        int e[3];
    };
    std::vector<Term> terms;

    static Poly constant(double c) { return {{{c, {0, 0, 0}}}}; }
    static Poly var(int i) {
        Poly p{{{1.0, {0, 0, 0}}}};
        p.terms[0].e[i] = 1;
        return p;
    }

    double eval(const Vec& p) const {
        double acc = 0.0;
        for (const auto& t : terms)
            acc += t.c * std::pow(p[0], t.e[0]) * std::pow(p[1], t.e[1]) *
                   std::pow(p[2], t.e[2]);
        return acc;
    }

    Poly d(int axis) const {
        Poly out;
        for (const auto& t : terms) {
            if (t.e[axis] == 0) continue;
            Term s = t;
            s.c *= s.e[axis];
            s.e[axis] -= 1;
            out.terms.push_back(s);
        }
        return out;
    }

    Poly operator+(const Poly& o) const {
        Poly out = *this;
        out.terms.insert(out.terms.end(), o.terms.begin(), o.terms.end());
        return out;
    }
    Poly operator*(const Poly& o) const {
        Poly out;
        for (const auto& a : terms)
            for (const auto& b : o.terms)
                out.terms.push_back({a.c * b.c, {a.e[0] + b.e[0], a.e[1] + b.e[1],
                                                a.e[2] + b.e[2]}});
        return out;
    }
    Poly pow(int k) const {
        Poly out = constant(1.0);
        for (int i = 0; i < k; ++i) out = out * (*this);
        return out;
    }
};

inline Poly substitute(const Poly& outer, const std::array<Poly, 3>& inner) {
    Poly out;
    for (const auto& t : outer.terms) {
        Poly term = Poly::constant(t.c);
        for (int i = 0; i < 3; ++i) term = term * inner[i].pow(t.e[i]);
        out = out + term;
    }
    return out;
}

inline CompatibleMap from_polys(const ExplosiveChart& src, const ExplosiveChart& dst,
                                std::array<Poly, 3> comps) {
    auto eval = [comps](const Vec& p) {
        Vec q(3);
        for (int i = 0; i < 3; ++i) q[i] = comps[i].eval(p);
        return q;
    };
    CompatibleMap map(src, dst, eval);
    map.set_closed_form(
        [comps](int out, int a, const Vec& p) { return comps[out].d(a).eval(p); },
        [comps](int out, int a, int b, const Vec& p) {
            return comps[out].d(a).d(b).eval(p);
        },
        [comps](int out, int a, int b, int c, const Vec& p) {
            return comps[out].d(a).d(b).d(c).eval(p);
        });
    return map;
}

inline std::array<Poly, 3> reference_map_components() {
    const Poly X = Poly::var(0), Y = Poly::var(1), Z = Poly::var(2);
    return {X + Poly::constant(0.1) * X * X,
            Y * (Poly::constant(1.0) + Poly::constant(0.3) * X) + Y * Z,
            Z * (Poly::constant(1.0) + Poly::constant(-0.3) * X) + Y * Y};
}

inline std::array<Poly, 3> second_map_components() {
    const Poly X = Poly::var(0), Y = Poly::var(1), Z = Poly::var(2);
    return {Poly::constant(2.0) * X,
            Y * (Poly::constant(1.0) + Poly::constant(-0.3) * X),
            Z * (Poly::constant(1.0) + Poly::constant(0.3) * X) +
                Poly::constant(-1.0) * Y * Y};
}

inline hbarlab::ExplodedPoint exploded_point(double x, double y, double z, double hbar) {
    hbarlab::ExplodedPoint p;
    p.x = Vec::Constant(1, x);
    p.y = Vec::Constant(1, y);
    p.z = Vec::Constant(1, z);
    p.hbar = hbar;
    return p;
}

}  // namespace hbarlab_tests
