#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hbarlab/fuzzy.hpp"
#include "hbarlab/moyal.hpp"
#include "hbarlab/planck.hpp"

namespace hbarlab {

enum class FieldBackend { Moyal, Fuzzy };

/// A sampled continuous field of algebras: one fiber per admissible hbar plus
/// the classical fiber at hbar = 0.
struct FieldModel {
    FieldBackend backend = FieldBackend::Fuzzy;
    std::vector<double> hbars;  // strictly decreasing, all > 0
    bool has_classical_fiber = true;
    // fuzzy fibers: matrix sizes k with hbar = 1/k
    std::vector<int> ks;
    // moyal fibers: lattice quantization parameters
    ConstantPoissonData data;
    int grid_n = 64;
    double extent = 8.0;
};

/// Fuzzy fibers indexed by a Planck set; every hbar must be a reciprocal
/// integer (the Bohr-Sommerfeld constraint for the sphere).
FieldModel assemble_fuzzy_field(const PlanckSet& set, int k_cap = 64);

FieldModel assemble_moyal_field(const ConstantPoissonData& data,
                                const std::vector<double>& hbars, int grid_n, double extent);

/// Quantizations of one symbol in every fiber, plus the hbar = 0 fiber
/// (the symbol itself, represented through its sup norm).
struct SymbolSection {
    FieldBackend backend = FieldBackend::Fuzzy;
    std::string name;
    std::vector<FuzzyElement> fuzzy_values;
    std::vector<LatticeFunction> moyal_values;
    double classical_sup = 0.0;
    SphereSymbol sphere_symbol;
    std::function<double(const Vec&)> flat_symbol;
};

SymbolSection symbol_section(const FieldModel& model, const SphereSymbol& f);
SymbolSection symbol_section(const FieldModel& model,
                             const std::function<double(const Vec&)>& f,
                             const std::string& name);

struct ContinuityRow {
    double hbar = 0.0;
    double norm = 0.0;
    double norm_gap = 0.0;        // | ||ev_h(a)|| - ||ev_0(a)|| |
    double product_defect = 0.0;  // || Q(f) Q(g) - Q(f g) ||, when g supplied
    double dirac_defect = 0.0;    // when g supplied
};

struct ContinuityReport {
    std::vector<ContinuityRow> rows;
    double ev0_norm = 0.0;
    double norm_gap_order = 0.0;
    double product_defect_order = 0.0;
    double dirac_defect_order = 0.0;
    bool has_second_symbol = false;
    std::string norm_proxy;  // "operator" for matrix fibers, "sup" for lattices
};

/// Deformation-continuity table; throws with fewer than three fibers (no
/// order can be fitted).
ContinuityReport continuity_report(const FieldModel& model, const SymbolSection& a,
                                   const SymbolSection* b = nullptr);

}  // namespace hbarlab
