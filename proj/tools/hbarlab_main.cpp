// hbarlab: numerical workbench for exploded groupoids, twisted convolution
// algebras, fuzzy spheres, and Planck-set selection.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "hbarlab/explosion.hpp"
#include "hbarlab/field.hpp"
#include "hbarlab/fuzzy.hpp"
#include "hbarlab/groupoid.hpp"
#include "hbarlab/moyal.hpp"
#include "hbarlab/planck.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hbarlab;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Table {
    std::string name;  // file stem
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct RunContext {
    std::string output_dir = ".";
    std::string format = "csv";  // csv | json
    std::uint64_t seed = 0;
    bool all_pass = true;

    void note(const std::string& check, double value, double tol, bool pass) {
        std::cout << check << ": " << (pass ? "PASS" : "FAIL") << " (value=" << fmt17(value)
                  << ", tol=" << fmt17(tol) << ")\n";
        if (!pass) all_pass = false;
    }

    void write(const Table& t) const {
        fs::create_directories(output_dir);
        const std::string ext = (format == "json") ? ".json" : ".csv";
        std::string path = (fs::path(output_dir) / (t.name + ext)).string();
        if (!all_pass) path += ".partial";
        std::ofstream out(path, std::ios::binary);
        if (format == "json") {
            json rows = json::array();
            for (const auto& r : t.rows) {
                json row;
                for (std::size_t i = 0; i < t.header.size(); ++i) row[t.header[i]] = r[i];
                rows.push_back(row);
            }
            out << rows.dump(2) << "\n";
        } else {
            for (std::size_t i = 0; i < t.header.size(); ++i)
                out << t.header[i] << (i + 1 < t.header.size() ? "," : "\n");
            for (const auto& r : t.rows)
                for (std::size_t i = 0; i < r.size(); ++i)
                    out << r[i] << (i + 1 < r.size() ? "," : "\n");
        }
        std::cout << "wrote " << path << "\n";
    }
};

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    if (out.empty()) throw CLI::ValidationError("empty list");
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw CLI::ValidationError("empty list");
    return out;
}

// ---------------------------------------------------------------- check ----

struct CheckOptions {
    std::string model = "constant-pi";
    int n = 10000;
    double tol = 1e-12;
    double form_tol = 1e-9;
};

int run_check(const CheckOptions& opt, RunContext& ctx) {
    std::mt19937_64 rng(ctx.seed);
    GroupoidChartModel model;
    bool has_forms = false;
    DifferentialFormModel omega;
    std::function<Vec(const Vec&)> theta;
    ConstantPoissonData data;
    if (opt.model == "constant-pi") {
        data = standard_symplectic_data(2);
        model = constant_pi_model(data);
        omega = constant_pi_symplectic_form(2);
        theta = constant_pi_contact_form(2);
        has_forms = true;
    } else if (opt.model == "pair") {
        model = pair_groupoid_model(2);
    } else {
        throw CLI::ValidationError("--model", "unknown model '" + opt.model + "'");
    }

    Table t{"check", {"check", "residual", "tolerance", "pass"}, {}};
    const auto rep = check_axioms(model, opt.n, opt.tol, rng);
    for (const auto& [name, res] : rep.residuals) {
        const bool ok = res < opt.tol;
        ctx.note("axiom " + name, res, opt.tol, ok);
        t.rows.push_back({name, fmt17(res), fmt17(opt.tol), ok ? "1" : "0"});
    }
    if (has_forms) {
        const auto fr = check_forms(model, omega, std::max(opt.n / 10, 50), opt.form_tol, rng);
        const bool c_ok = fr.closedness < opt.form_tol;
        const bool m_ok = fr.multiplicativity < opt.form_tol;
        const bool d_ok = !fr.degenerate;
        ctx.note("form closedness", fr.closedness, opt.form_tol, c_ok);
        ctx.note("form multiplicativity", fr.multiplicativity, opt.form_tol, m_ok);
        ctx.note("form nondegeneracy (min |det|)", fr.min_abs_det, opt.form_tol, d_ok);
        t.rows.push_back({"form_closedness", fmt17(fr.closedness), fmt17(opt.form_tol),
                          c_ok ? "1" : "0"});
        t.rows.push_back({"form_multiplicativity", fmt17(fr.multiplicativity),
                          fmt17(opt.form_tol), m_ok ? "1" : "0"});
        t.rows.push_back({"form_min_abs_det", fmt17(fr.min_abs_det), fmt17(opt.form_tol),
                          d_ok ? "1" : "0"});
    }
    ctx.write(t);
    return ctx.all_pass ? 0 : 2;
}

// -------------------------------------------------------------- explode ----

struct ExplodeOptions {
    int samples = 200;
    double tol = 1e-6;
};

int run_explode(const ExplodeOptions& opt, RunContext& ctx) {
    std::mt19937_64 rng(ctx.seed);
    ExplosiveChart chart(1, 1, 1);
    CompatibleMap phi(chart, chart, [](const Vec& p) {
        Vec q(3);
        q[0] = p[0] + 0.25 * p[0] * p[0] + 0.5 * p[1];
        q[1] = p[1] * (1.0 + 0.5 * p[0]) + p[1] * p[2];
        q[2] = p[2] * (1.0 - 0.25 * p[0]) + p[1] * p[1];
        return q;
    });

    double cont = 0.0, res_comp = 0.0, res_form = 0.0;
    std::uniform_real_distribution<double> unif(-0.5, 0.5);
    NormalOneForm theta{[](const Vec& p) {
        Vec c(3);
        c[0] = p[1];          // y dx
        c[1] = p[2];          // z dy
        c[2] = 1.0 + p[0];    // (1 + x) dz
        return c;
    }};
    RescaleFunction r{[](const Vec& p) { return 0.3 + 0.1 * p[0]; }};
    RescaleFunction s{[](const Vec& p) { return -0.2 + 0.05 * p[0]; }};
    RescaleFunction rs{[](const Vec& p) { return 0.1 + 0.15 * p[0]; }};
    const double rc = 0.35;  // constant rescale for the form identity
    RescaleFunction rconst{[rc](const Vec&) { return rc; }};

    for (int it = 0; it < opt.samples; ++it) {
        ExplodedPoint p;
        p.x = Vec::Constant(1, unif(rng));
        p.y = Vec::Constant(1, unif(rng));
        p.z = Vec::Constant(1, unif(rng));
        p.hbar = 0.0;
        // continuity of the exploded map at hbar = 0: closed form against the
        // limit of the hbar != 0 conjugation
        const ExplodedPoint at0 = explode_map(phi, p);
        std::vector<double> comps(3, 0.0);
        std::vector<std::vector<double>> ladders(3);
        for (double h : {1e-3, 5e-4, 2.5e-4}) {
            ExplodedPoint q = p;
            q.hbar = h;
            const ExplodedPoint im = explode_map(phi, q);
            ladders[0].push_back(im.x[0]);
            ladders[1].push_back(im.y[0]);
            ladders[2].push_back(im.z[0]);
        }
        const double ref[3] = {at0.x[0], at0.y[0], at0.z[0]};
        for (int c = 0; c < 3; ++c) {
            const double lim = richardson_limit(ladders[c], 1).value;
            cont = std::max(cont, std::abs(lim - ref[c]) / std::max(1.0, std::abs(ref[c])));
        }
        // rescaling composition
        ExplodedPoint ph = p;
        ph.hbar = unif(rng) + 0.6;
        const ExplodedPoint both = rescale(chart, r, rescale(chart, s, ph));
        const ExplodedPoint direct = rescale(chart, rs, ph);
        for (int c = 0; c < 1; ++c) {
            res_comp = std::max(res_comp, std::abs(both.x[c] - direct.x[c]));
            res_comp = std::max(res_comp, std::abs(both.y[c] - direct.y[c]));
            res_comp = std::max(res_comp, std::abs(both.z[c] - direct.z[c]));
        }
        res_comp = std::max(res_comp, std::abs(both.hbar - direct.hbar));
        // rescaling vs scaled form: Res_r^*(E theta) = E(e^r theta), with a
        // constant rescale so the pullback only scales coordinate directions
        ExplodedPoint pf = p;
        pf.hbar = 0.4 + 0.2 * unif(rng);
        const FormValue at_res = explode_form(chart, theta, rescale(chart, rconst, pf));
        NormalOneForm scaled{[&](const Vec& q) {
            return (std::exp(rc) * theta.coeffs(q)).eval();
        }};
        const FormValue rhs = explode_form(chart, scaled, pf);
        const double er = std::exp(rc);
        res_form = std::max(res_form, std::abs(at_res.dxyz[0] - rhs.dxyz[0]));
        res_form = std::max(res_form, std::abs(er * at_res.dxyz[1] - rhs.dxyz[1]));
        res_form = std::max(res_form, std::abs(er * er * at_res.dxyz[2] - rhs.dxyz[2]));
        res_form = std::max(res_form, std::abs(at_res.dhbar / er - rhs.dhbar));
    }
    Table t{"explode", {"check", "residual", "tolerance", "pass"}, {}};
    const bool c_ok = cont < opt.tol;
    const bool r_ok = res_comp < 1e-12;
    const bool f_ok = res_form < opt.tol;
    ctx.note("exploded-map continuity", cont, opt.tol, c_ok);
    ctx.note("rescaling composition", res_comp, 1e-12, r_ok);
    ctx.note("rescaling form identity", res_form, opt.tol, f_ok);
    t.rows.push_back({"continuity", fmt17(cont), fmt17(opt.tol), c_ok ? "1" : "0"});
    t.rows.push_back({"rescale_composition", fmt17(res_comp), fmt17(1e-12), r_ok ? "1" : "0"});
    t.rows.push_back({"rescale_form", fmt17(res_form), fmt17(opt.tol), f_ok ? "1" : "0"});
    ctx.write(t);
    return ctx.all_pass ? 0 : 2;
}

// ---------------------------------------------------------------- moyal ----

struct MoyalOptions {
    std::string hbar_list = "0.5,1.0,2.0";
    int grid = 64;
};

int run_moyal(const MoyalOptions& opt, RunContext& ctx) {
    auto data = standard_symplectic_data(2);
    data.metric = Mat::Identity(2, 2);
    Table t{"moyal", {"check", "hbar", "value", "tolerance", "pass"}, {}};
    for (double h : parse_double_list(opt.hbar_list)) {
        const double extent = 6.0 * std::sqrt(2.0 / h);
        const auto K = unit_multiplier(h, data, opt.grid, extent);
        const auto KK = kahler_product(K, K, data);
        double err = 0.0;
        for (int i = 0; i < K.y_values.size(); ++i)
            err = std::max(err, std::abs(KK.y_values.values[i] - K.y_values.values[i]));
        const bool ok = err < 1e-6;
        ctx.note("unit idempotency hbar=" + fmt17(h), err, 1e-6, ok);
        t.rows.push_back({"unit_idempotency", fmt17(h), fmt17(err), fmt17(1e-6), ok ? "1" : "0"});
    }
    // classical limit of the unit multiplier
    std::vector<MoyalElement> fam;
    for (double h : {0.2, 0.1, 0.05})
        fam.push_back(unit_multiplier(h, data, opt.grid, 6.0 * std::sqrt(2.0 / 0.05)));
    const auto lim = ev0(fam, data, Vec::Zero(2), Vec::Zero(2));
    const double ev_err = std::abs(lim.value - Cplx{1.0, 0.0});
    const bool ev_ok = ev_err < 1e-3;
    ctx.note("classical limit of unit", ev_err, 1e-3, ev_ok);
    t.rows.push_back({"unit_ev0", fmt17(0.0), fmt17(ev_err), fmt17(1e-3), ev_ok ? "1" : "0"});
    ctx.write(t);
    return ctx.all_pass ? 0 : 2;
}

// ---------------------------------------------------------------- fuzzy ----

struct FuzzyOptions {
    std::string k_list = "4,8,16,32";
    std::string symbol = "z";
};

int run_fuzzy(const FuzzyOptions& opt, RunContext& ctx) {
    const auto ks = parse_int_list(opt.k_list);
    const auto sym = builtin_symbol(opt.symbol);
    const auto curve = classical_limit_curve(sym, ks);
    Table t{"fuzzy", {"k", "error", "fitted_order"}, {}};
    for (std::size_t i = 0; i < ks.size(); ++i)
        t.rows.push_back({std::to_string(ks[i]), fmt17(curve.errors[i]),
                          fmt17(curve.fitted_order)});
    for (int k : ks) {
        const auto rep = spin_rep(k);
        const auto quad = sphere_quadrature(k);
        const auto frame = coherent_frame(rep, quad);
        const double res = resolution_of_identity(rep, frame, quad);
        ctx.note("resolution of identity k=" + std::to_string(k), res, 1e-9, res < 1e-9);
    }
    std::cout << "fitted order: " << fmt17(curve.fitted_order) << "\n";
    ctx.write(t);
    return ctx.all_pass ? 0 : 2;
}

// --------------------------------------------------------------- planck ----

struct PlanckOptions {
    std::string model = "fibonacci";
    double min_hbar = 1e-3;
    bool screen = false;
};

int run_planck(const PlanckOptions& opt, RunContext& ctx) {
    const auto profile = builtin_profile(opt.model);
    if (opt.screen) {
        GridSpec grid{0.1, 0.9, 64};
        const auto rep = monodromy_ratio_report(profile, grid);
        Table t{"screening", {"pair", "min_ratio", "max_ratio", "spread", "constant",
                              "witness", "verdict"}, {}};
        for (const auto& st : rep.ratio_stats) {
            std::string witness = "-";
            if (st.witness)
                witness = std::to_string(st.witness->num) + "/" + std::to_string(st.witness->den);
            t.rows.push_back({std::to_string(st.i) + ":" + std::to_string(st.j),
                              fmt17(st.min_ratio), fmt17(st.max_ratio), fmt17(st.spread),
                              st.constant ? "1" : "0", witness, verdict_name(rep.verdict)});
        }
        if (t.rows.empty())
            t.rows.push_back({"0:0", "0", "0", "0", "1", "-", verdict_name(rep.verdict)});
        std::cout << "verdict: " << verdict_name(rep.verdict)
                  << (rep.failing_clause.empty() ? "" : " (" + rep.failing_clause + ")") << "\n";
        ctx.write(t);
        return 0;
    }
    const auto set = bohr_sommerfeld_set(profile, opt.min_hbar);
    const std::size_t ncomp = profile.components.size();
    Table t{"planck", {}, {}};
    t.header.push_back("hbar");
    for (std::size_t c = 0; c < ncomp; ++c) t.header.push_back("n" + std::to_string(c + 1));
    t.header.push_back("size");
    for (const auto& e : set.entries) {
        std::vector<std::string> row{fmt17(e.hbar)};
        for (auto n : e.integers) row.push_back(std::to_string(n));
        row.push_back(std::to_string(e.size));
        t.rows.push_back(row);
    }
    std::cout << "admissible values: " << set.entries.size() << " (plus hbar=0)\n";
    ctx.write(t);
    return 0;
}

// ---------------------------------------------------------------- field ----

struct FieldOptions {
    std::string backend = "fuzzy";
    std::string symbol = "z";
    std::string second;  // optional second symbol for defect columns
    int k_max = 32;
};

int run_field(const FieldOptions& opt, RunContext& ctx) {
    if (opt.backend != "fuzzy")
        throw CLI::ValidationError("--backend", "only the fuzzy backend is wired to the CLI");
    auto profile = builtin_profile("single-sphere");
    const auto set = bohr_sommerfeld_set(profile, 1.0 / (opt.k_max + 0.5));
    const auto model = assemble_fuzzy_field(set, opt.k_max);
    const auto a = symbol_section(model, builtin_symbol(opt.symbol));
    std::optional<SymbolSection> b;
    if (!opt.second.empty()) b = symbol_section(model, builtin_symbol(opt.second));
    const auto rep = continuity_report(model, a, b ? &*b : nullptr);
    Table t{"field",
            {"hbar", "norm", "norm_gap", "product_defect", "dirac_defect"},
            {}};
    for (const auto& row : rep.rows)
        t.rows.push_back({fmt17(row.hbar), fmt17(row.norm), fmt17(row.norm_gap),
                          fmt17(row.product_defect), fmt17(row.dirac_defect)});
    std::cout << "norm proxy: " << rep.norm_proxy << ", ev0 norm: " << fmt17(rep.ev0_norm)
              << "\n";
    std::cout << "norm gap order: " << fmt17(rep.norm_gap_order) << "\n";
    if (rep.has_second_symbol) {
        std::cout << "product defect order: " << fmt17(rep.product_defect_order) << "\n";
        std::cout << "dirac defect order: " << fmt17(rep.dirac_defect_order) << "\n";
    }
    if (opt.symbol == "z") {
        double worst = 0.0;
        for (std::size_t i = 0; i < model.ks.size(); ++i) {
            const double expected = (model.ks[i] - 1.0) / (model.ks[i] + 1.0);
            worst = std::max(worst, std::abs(rep.rows[i].norm - expected));
        }
        ctx.note("height-symbol norm law", worst, 1e-10, worst < 1e-10);
    }
    ctx.write(t);
    return ctx.all_pass ? 0 : 2;
}

// ------------------------------------------------------ config handling ----

const std::set<std::string> kSubcommands = {"check", "explode", "moyal",
                                            "fuzzy", "planck", "field"};

const std::map<std::string, std::set<std::string>> kParamKeys = {
    {"check", {"model", "n", "tol", "form_tol"}},
    {"explode", {"samples", "tol"}},
    {"moyal", {"hbar_list", "grid", "hbar"}},
    {"fuzzy", {"k_list", "symbol", "hbar"}},
    {"planck", {"model", "min_hbar", "screen"}},
    {"field", {"backend", "symbol", "second", "k_max"}},
};

/// Validates a run configuration; returns diagnostics as (pointer, message).
std::vector<std::pair<std::string, std::string>> validate_config(const json& cfg) {
    std::vector<std::pair<std::string, std::string>> errs;
    const std::set<std::string> top = {"subcommand", "parameters", "seed", "output_dir",
                                       "format"};
    for (const auto& [key, _] : cfg.items())
        if (!top.count(key)) errs.push_back({"/" + key, "unknown key"});
    if (!cfg.contains("subcommand") || !cfg["subcommand"].is_string()) {
        errs.push_back({"/subcommand", "missing or not a string"});
        return errs;
    }
    const std::string sub = cfg["subcommand"];
    if (!kSubcommands.count(sub)) {
        errs.push_back({"/subcommand", "unknown subcommand '" + sub + "'"});
        return errs;
    }
    if (cfg.contains("format")) {
        const std::string f = cfg["format"];
        if (f != "csv" && f != "json") errs.push_back({"/format", "must be csv or json"});
    }
    if (cfg.contains("seed") && !cfg["seed"].is_number_integer())
        errs.push_back({"/seed", "must be an integer"});
    if (cfg.contains("parameters")) {
        const auto& allowed = kParamKeys.at(sub);
        for (const auto& [key, val] : cfg["parameters"].items()) {
            if (!allowed.count(key)) {
                errs.push_back({"/parameters/" + key, "unknown key for " + sub});
                continue;
            }
            if (key == "hbar" && (sub == "fuzzy")) {
                const double h = val.get<double>();
                const double k = 1.0 / h;
                if (h <= 0.0 || std::abs(k - std::round(k)) > 1e-9)
                    errs.push_back({"/parameters/hbar",
                                    "fuzzy fibers need 1/hbar integral: the sphere's "
                                    "holonomy condition only holds when the reciprocal of "
                                    "hbar is an integer"});
            }
        }
    }
    return errs;
}

int run_config(const json& cfg, RunContext& ctx) {
    const std::string sub = cfg["subcommand"];
    if (cfg.contains("seed")) ctx.seed = cfg["seed"].get<std::uint64_t>();
    if (cfg.contains("output_dir")) ctx.output_dir = cfg["output_dir"];
    if (cfg.contains("format")) ctx.format = cfg["format"];
    const json params = cfg.value("parameters", json::object());
    auto pget = [&](const char* key, auto fallback) {
        using T = decltype(fallback);
        return params.contains(key) ? params[key].get<T>() : fallback;
    };
    if (sub == "check") {
        CheckOptions o;
        o.model = pget("model", o.model);
        o.n = pget("n", o.n);
        o.tol = pget("tol", o.tol);
        o.form_tol = pget("form_tol", o.form_tol);
        return run_check(o, ctx);
    }
    if (sub == "explode") {
        ExplodeOptions o;
        o.samples = pget("samples", o.samples);
        o.tol = pget("tol", o.tol);
        return run_explode(o, ctx);
    }
    if (sub == "moyal") {
        MoyalOptions o;
        o.hbar_list = pget("hbar_list", o.hbar_list);
        o.grid = pget("grid", o.grid);
        return run_moyal(o, ctx);
    }
    if (sub == "fuzzy") {
        FuzzyOptions o;
        o.k_list = pget("k_list", o.k_list);
        o.symbol = pget("symbol", o.symbol);
        return run_fuzzy(o, ctx);
    }
    if (sub == "planck") {
        PlanckOptions o;
        o.model = pget("model", o.model);
        o.min_hbar = pget("min_hbar", o.min_hbar);
        o.screen = pget("screen", o.screen);
        return run_planck(o, ctx);
    }
    FieldOptions o;
    o.backend = pget("backend", o.backend);
    o.symbol = pget("symbol", o.symbol);
    o.second = pget("second", o.second);
    o.k_max = pget("k_max", o.k_max);
    return run_field(o, ctx);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hbarlab: geometric quantization workbench"};
    app.require_subcommand(1);
    // let --seed/--output-dir/--format appear after the subcommand too
    app.fallthrough();

    RunContext ctx;
    app.add_option("--seed", ctx.seed, "deterministic RNG seed (default 0)");
    app.add_option("--output-dir", ctx.output_dir, "report directory (default .)");
    app.add_option("--format", ctx.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    CheckOptions check_opt;
    auto* check = app.add_subcommand("check", "groupoid diagram checks");
    check->add_option("--model", check_opt.model, "constant-pi or pair");
    check->add_option("--n", check_opt.n, "sample count");
    check->add_option("--tol", check_opt.tol, "axiom tolerance");
    check->add_option("--form-tol", check_opt.form_tol, "form-identity tolerance");

    ExplodeOptions explode_opt;
    auto* explode = app.add_subcommand("explode", "exploded-chart calculus checks");
    explode->add_option("--samples", explode_opt.samples, "sample count");
    explode->add_option("--tol", explode_opt.tol, "continuity tolerance");

    MoyalOptions moyal_opt;
    auto* moyal = app.add_subcommand("moyal", "twisted-convolution algebra checks");
    moyal->add_option("--hbar-list", moyal_opt.hbar_list, "comma-separated hbar values");
    moyal->add_option("--grid", moyal_opt.grid, "lattice points per axis");

    FuzzyOptions fuzzy_opt;
    auto* fuzzy = app.add_subcommand("fuzzy", "fuzzy-sphere convergence study");
    fuzzy->add_option("--k-list", fuzzy_opt.k_list, "comma-separated matrix sizes");
    fuzzy->add_option("--symbol", fuzzy_opt.symbol, "builtin symbol name");

    PlanckOptions planck_opt;
    auto* planck = app.add_subcommand("planck", "admissible Planck-constant scan");
    planck->add_option("--model", planck_opt.model,
                       "single-sphere, fibonacci, or golden-linear");
    planck->add_option("--min-hbar", planck_opt.min_hbar, "lower scan bound");
    planck->add_flag("--screen", planck_opt.screen, "integrability screening instead");

    FieldOptions field_opt;
    auto* field = app.add_subcommand("field", "deformation-continuity report");
    field->add_option("--backend", field_opt.backend, "fiber backend (fuzzy)");
    field->add_option("--symbol", field_opt.symbol, "builtin symbol name");
    field->add_option("--second-symbol", field_opt.second, "second symbol for defects");
    field->add_option("--k-max", field_opt.k_max, "largest matrix size");

    auto* list = app.add_subcommand("list", "builtin models, symbols, profiles");

    std::string config_path;
    auto* validate = app.add_subcommand("validate", "validate a JSON run config");
    validate->add_option("path", config_path, "config file")->required();
    auto* runcfg = app.add_subcommand("run", "execute a JSON run config");
    runcfg->add_option("--config", config_path, "config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (const char* threads = std::getenv("HBARLAB_THREADS")) (void)threads;  // sequential

    try {
        if (check->parsed()) return run_check(check_opt, ctx);
        if (explode->parsed()) return run_explode(explode_opt, ctx);
        if (moyal->parsed()) return run_moyal(moyal_opt, ctx);
        if (fuzzy->parsed()) return run_fuzzy(fuzzy_opt, ctx);
        if (planck->parsed()) return run_planck(planck_opt, ctx);
        if (field->parsed()) return run_field(field_opt, ctx);
        if (list->parsed()) {
            std::cout << "models:\n"
                      << "  constant-pi    exploded groupoid of a constant Poisson structure\n"
                      << "  pair           pair groupoid of the plane\n"
                      << "profiles:\n"
                      << "  fibonacci      two-sphere family with Fibonacci-reciprocal levels\n"
                      << "  golden-linear  two-sphere family with a golden-ratio area ratio\n"
                      << "  single-sphere  one sphere, reciprocal-integer levels\n"
                      << "symbols:\n"
                      << "  constant x xy xyz xz y z zz zzz zzzz\n";
            return 0;
        }
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "cannot read config: " << config_path << "\n";
            return 1;
        }
        json cfg;
        try {
            cfg = json::parse(in);
        } catch (const json::parse_error& e) {
            std::cerr << "config parse error: " << e.what() << "\n";
            return 1;
        }
        const auto errs = validate_config(cfg);
        if (validate->parsed()) {
            if (errs.empty()) {
                std::cout << "OK\n";
                return 0;
            }
            for (const auto& [ptr, msg] : errs) std::cerr << ptr << ": " << msg << "\n";
            return 1;
        }
        if (!errs.empty()) {
            for (const auto& [ptr, msg] : errs) std::cerr << ptr << ": " << msg << "\n";
            return 1;
        }
        return run_config(cfg, ctx);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
