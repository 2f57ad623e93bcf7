#include "hbarlab/field.hpp"

#include <cmath>
#include <stdexcept>

namespace hbarlab {

FieldModel assemble_fuzzy_field(const PlanckSet& set, int k_cap) {
    if (set.entries.empty()) throw std::invalid_argument("assemble_fuzzy_field: empty index");
    FieldModel m;
    m.backend = FieldBackend::Fuzzy;
    for (const auto& e : set.entries) {
        const double kf = 1.0 / e.hbar;
        const double rounded = std::round(kf);
        if (std::abs(kf - rounded) > 1e-9)
            throw std::invalid_argument(
                "assemble_fuzzy_field: fuzzy fibers only exist at reciprocal-integer hbar "
                "(the sphere's Bohr-Sommerfeld holonomy is only trivial if 1/hbar is an "
                "integer); got hbar=" + std::to_string(e.hbar));
        const int k = static_cast<int>(rounded);
        if (k > k_cap) continue;
        m.hbars.push_back(e.hbar);
        m.ks.push_back(k);
    }
    if (m.hbars.empty())
        throw std::invalid_argument("assemble_fuzzy_field: no fibers below the size cap");
    return m;
}

FieldModel assemble_moyal_field(const ConstantPoissonData& data,
                                const std::vector<double>& hbars, int grid_n, double extent) {
    if (hbars.empty()) throw std::invalid_argument("assemble_moyal_field: empty index");
    for (std::size_t i = 0; i < hbars.size(); ++i) {
        if (hbars[i] <= 0.0)
            throw std::invalid_argument("assemble_moyal_field: hbar values must be positive");
        if (i > 0 && hbars[i] >= hbars[i - 1])
            throw std::invalid_argument("assemble_moyal_field: index must be strictly decreasing");
    }
    FieldModel m;
    m.backend = FieldBackend::Moyal;
    m.data = data;
    m.hbars = hbars;
    m.grid_n = grid_n;
    m.extent = extent;
    return m;
}

SymbolSection symbol_section(const FieldModel& model, const SphereSymbol& f) {
    if (model.backend != FieldBackend::Fuzzy)
        throw std::invalid_argument("symbol_section: sphere symbol requires the fuzzy backend");
    SymbolSection s;
    s.backend = FieldBackend::Fuzzy;
    s.name = f.name;
    s.sphere_symbol = f;
    for (int k : model.ks) {
        const auto rep = spin_rep(k);
        const auto quad = sphere_quadrature(std::max(k + 8, 16));
        const auto frame = coherent_frame(rep, quad);
        s.fuzzy_values.push_back(toeplitz_quantize(f.value, frame, quad));
        for (const auto& x : quad.nodes)
            s.classical_sup = std::max(s.classical_sup, std::abs(f.value(x)));
    }
    return s;
}

SymbolSection symbol_section(const FieldModel& model,
                             const std::function<double(const Vec&)>& f,
                             const std::string& name) {
    if (model.backend != FieldBackend::Moyal)
        throw std::invalid_argument("symbol_section: lattice symbol requires the moyal backend");
    SymbolSection s;
    s.backend = FieldBackend::Moyal;
    s.name = name;
    s.flat_symbol = f;
    const int dim = static_cast<int>(model.data.n);
    const double spacing = 2.0 * model.extent / model.grid_n;
    const auto samples = LatticeFunction::sample(dim, model.grid_n, spacing,
                                                 [&](const Vec& x) { return Cplx{f(x), 0.0}; });
    s.classical_sup = samples.sup_norm();
    for (double h : model.hbars) s.moyal_values.push_back(weyl_quantize(samples, h));
    return s;
}

ContinuityReport continuity_report(const FieldModel& model, const SymbolSection& a,
                                   const SymbolSection* b) {
    if (model.hbars.size() < 3)
        throw std::invalid_argument(
            "continuity_report: need at least three index points to fit decay orders");
    if (a.backend != model.backend || (b && b->backend != model.backend))
        throw std::invalid_argument("continuity_report: backend mismatch");
    ContinuityReport rep;
    rep.ev0_norm = a.classical_sup;
    rep.has_second_symbol = (b != nullptr);
    rep.norm_proxy = (model.backend == FieldBackend::Fuzzy) ? "operator" : "sup";

    for (std::size_t i = 0; i < model.hbars.size(); ++i) {
        ContinuityRow row;
        row.hbar = model.hbars[i];
        if (model.backend == FieldBackend::Fuzzy) {
            const int k = model.ks[i];
            row.norm = operator_norm(a.fuzzy_values[i].mat);
            if (b) {
                const auto rep_k = spin_rep(k);
                const auto quad = sphere_quadrature(std::max(k + 8, 16));
                const auto frame = coherent_frame(rep_k, quad);
                const auto& fs = a.sphere_symbol;
                const auto& gs = b->sphere_symbol;
                auto prod = [&](const Vec3& p) { return fs.value(p) * gs.value(p); };
                const auto qfg = toeplitz_quantize(std::function<double(const Vec3&)>(prod),
                                                   frame, quad);
                row.product_defect = operator_norm(
                    a.fuzzy_values[i].mat * b->fuzzy_values[i].mat - qfg.mat);
                row.dirac_defect = dirac_defect_sphere(fs, gs, k);
            }
        } else {
            row.norm = a.moyal_values[i].sup_norm();
            if (b) {
                const double h = model.hbars[i];
                const auto conv = twisted_convolution(a.moyal_values[i], b->moyal_values[i], h,
                                                      model.data.Pi, PolarizationCase::FlatV);
                const int dim = static_cast<int>(model.data.n);
                const double spacing = 2.0 * model.extent / model.grid_n;
                const auto fg = LatticeFunction::sample(
                    dim, model.grid_n, spacing,
                    [&](const Vec& x) { return Cplx{a.flat_symbol(x) * b->flat_symbol(x), 0.0}; });
                const auto qfg = weyl_quantize(fg, h);
                double d = 0.0;
                for (int t = 0; t < conv.size(); ++t)
                    d = std::max(d, std::abs(conv.values[t] - qfg.values[t]));
                row.product_defect = d;
                const auto fsamp = LatticeFunction::sample(
                    dim, model.grid_n, spacing,
                    [&](const Vec& x) { return Cplx{a.flat_symbol(x), 0.0}; });
                const auto gsamp = LatticeFunction::sample(
                    dim, model.grid_n, spacing,
                    [&](const Vec& x) { return Cplx{b->flat_symbol(x), 0.0}; });
                row.dirac_defect = dirac_defect(fsamp, gsamp, h, model.data.Pi);
            }
        }
        row.norm_gap = std::abs(row.norm - rep.ev0_norm);
        rep.rows.push_back(row);
    }

    auto fit = [&](auto pick) {
        std::vector<double> hs, vs;
        for (const auto& r : rep.rows) {
            const double v = pick(r);
            if (v > 1e-15) {
                hs.push_back(r.hbar);
                vs.push_back(v);
            }
        }
        if (hs.size() < 2) return 0.0;
        return fit_loglog_slope(hs, vs);
    };
    rep.norm_gap_order = fit([](const ContinuityRow& r) { return r.norm_gap; });
    if (b) {
        rep.product_defect_order = fit([](const ContinuityRow& r) { return r.product_defect; });
        rep.dirac_defect_order = fit([](const ContinuityRow& r) { return r.dirac_defect; });
    }
    return rep;
}

}  // namespace hbarlab
