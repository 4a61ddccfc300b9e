#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>
#include <random>
#include <set>

#include "cli_common.hpp"
#include "hopfield/oracle.hpp"
#include "hopfield/thermometry.hpp"

namespace cli {

using namespace hopfield;

hopfield::DRule parse_drule(const std::string& s) {
    if (s == "trk") return {DRule::Kind::TRK, 0.0};
    if (s == "zero") return {DRule::Kind::Zero, 0.0};
    if (s == "rwa") return {DRule::Kind::RWA, 0.0};
    if (s.rfind("scaled:", 0) == 0)
        return {DRule::Kind::Scaled, std::stod(s.substr(7))};
    if (s.rfind("explicit:", 0) == 0)
        return {DRule::Kind::Explicit, std::stod(s.substr(9))};
    throw InvalidParams("unknown d-rule '" + s +
                        "' (trk | zero | rwa | scaled:<d> | explicit:<D>)");
}

namespace {

struct RunConfig {
    std::string command;
    double omega_c = 1.0;
    double omega_b = 1.0;
    bool resonance = false;
    double g = 0.0;
    double g1 = -1.0, g2 = -1.0;  // negative: derive from g
    std::string d_rule = "trk";
    double gamma = 0.05;
    double t_obs = 200.0;
    std::vector<double> temperatures;
    std::vector<std::vector<std::string>> sweeps_raw;
    std::string out;
    int workers = 0;
    std::string preset;

    // command-specific
    std::string state = "10";
    std::string method = "closed";
    int num_levels = 50;
    bool shifted = true;
    std::vector<std::string> families;
    std::vector<std::string> curves;
    int n_measurements = 1;
    double omega_max = 3.0;
    int omega_points = 3000;
    std::string suite = "all";
    int cutoff = 150;
    int dyn_cutoff = 60;
    int points = 8;

    DRule rule() const { return parse_drule(d_rule); }

    ModelParams params(double g_value, double wb) const {
        const DRule r = rule();
        ModelParams p;
        p.omega_c = omega_c;
        p.omega_b = wb;
        p.g1 = g1 >= 0.0 ? g1 : g_value;
        p.g2 = r.is_rwa() ? 0.0 : (g2 >= 0.0 ? g2 : g_value);
        p.D = r.is_rwa() ? 0.0 : r.D_for(g_value, wb);
        return p;
    }

    FilterConfig filter() const {
        return make_filter(gamma, t_obs, omega_max, omega_points);
    }

    std::vector<SweepAxis> sweeps() const {
        std::vector<SweepAxis> out;
        for (const auto& raw : sweeps_raw) {
            SweepAxis ax;
            ax.var = raw[0];
            ax.start = std::stod(raw[1]);
            ax.stop = std::stod(raw[2]);
            ax.count = std::stoi(raw[3]);
            if (raw.size() > 4) {
                if (raw[4] == "log") ax.log = true;
                else if (raw[4] != "linear")
                    throw InvalidParams("sweep scale must be linear or log");
            }
            out.push_back(ax);
        }
        return out;
    }
};

std::string axis_label(const std::string& var) {
    if (var == "g") return "g/omega_c";
    if (var == "omega_b") return "omega_b/omega_c";
    if (var == "T") return "kT/omega_c";
    if (var == "D") return "D/omega_c";
    throw InvalidParams("unknown sweep variable '" + var + "'");
}

FockProduct parse_state(const std::string& s) {
    if (s == "10") return {1, 0};
    if (s == "01") return {0, 1};
    const auto comma = s.find(',');
    if (comma != std::string::npos)
        return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
    throw InvalidParams("state must be 10, 01 or n,m");
}

Json config_json(const RunConfig& c) {
    Json j;
    j["omega_c"] = c.omega_c;
    j["omega_b"] = c.omega_b;
    j["g"] = c.g;
    if (c.g1 >= 0.0) j["g1"] = c.g1;
    if (c.g2 >= 0.0) j["g2"] = c.g2;
    j["d_rule"] = c.d_rule;
    j["gamma"] = c.gamma;
    j["t_obs"] = c.t_obs;
    if (!c.temperatures.empty()) j["temperatures"] = c.temperatures;
    Json sweeps = Json::array();
    for (const auto& ax : c.sweeps()) {
        Json a;
        a["var"] = ax.var;
        a["start"] = ax.start;
        a["stop"] = ax.stop;
        a["count"] = ax.count;
        a["scale"] = ax.log ? "log" : "linear";
        sweeps.push_back(a);
    }
    j["sweeps"] = sweeps;
    j["workers"] = c.workers;
    if (!c.preset.empty()) j["preset"] = c.preset;
    return j;
}

void write_sidecar(const RunConfig& c, const std::string& csv_path, std::size_t rows,
                   Json extra) {
    Json j;
    j["command"] = c.command;
    j["version"] = kVersion;
    j["config"] = config_json(c);
    j["outputs"]["csv"] = std::filesystem::path(csv_path).filename().string();
    j["outputs"]["rows"] = rows;
    for (auto& [k, v] : extra.items()) j[k] = v;
    write_atomic(c.out + ".json", j.dump(2) + "\n");
}

int effective_workers(const RunConfig& c) {
    if (c.workers > 0) return c.workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

// ---------------------------------------------------------------- polaritons

int cmd_polaritons(const RunConfig& c) {
    auto sweeps = c.sweeps();
    if (sweeps.empty()) sweeps.push_back({"g", 0.0, 3.0, 301, false});
    if (sweeps.size() != 1)
        throw InvalidParams("polaritons expects exactly one sweep axis");
    const SweepAxis ax = sweeps[0];
    if (ax.var == "T") throw InvalidParams("polaritons cannot sweep T");
    const auto xs = ax.values();

    std::vector<std::string> fams = c.families;
    if (fams.empty()) fams.push_back(c.d_rule);

    CsvWriter csv({axis_label(ax.var), "family", "omega_x/omega_c", "omega_y/omega_c",
                   "omega_y_sq/omega_c_sq", "phase"});
    std::map<std::string, long long> phase_count;
    for (const auto& fam : fams) {
        RunConfig cf = c;
        cf.d_rule = fam;
        const DRule rule = cf.rule();
        for (double x : xs) {
            const double g = ax.var == "g" ? x : c.g;
            const double wb = ax.var == "omega_b" ? x * c.omega_c : c.omega_b;
            ModelParams p = cf.params(g, wb);
            if (ax.var == "D") p.D = x;
            if (rule.is_rwa()) {
                const auto [wx, wy] = rwa_frequencies(p);
                csv.row({x, fam, wx / c.omega_c, wy / c.omega_c,
                         (wy * wy) / (c.omega_c * c.omega_c), std::string("normal")});
                ++phase_count["normal"];
            } else {
                const auto s = polariton_frequencies(p);
                const double wy = s.phase == Phase::Unstable
                                      ? std::nan("")
                                      : s.omega_y() / c.omega_c;
                csv.row({x, fam, s.omega_x() / c.omega_c, wy,
                         s.omega_y_sq / (c.omega_c * c.omega_c),
                         std::string(to_string(s.phase))});
                ++phase_count[to_string(s.phase)];
            }
        }
    }
    write_atomic(c.out + ".csv", csv.render());
    Json extra;
    extra["phases"] = phase_count;
    extra["families"] = fams;
    write_sidecar(c, c.out + ".csv", csv.size(), extra);
    return 0;
}

// -------------------------------------------------------------------- levels

int cmd_levels(const RunConfig& c) {
    auto sweeps = c.sweeps();
    if (sweeps.empty()) sweeps.push_back({"g", 0.0, 3.0, 301, false});
    if (sweeps.size() != 1 || sweeps[0].var != "g")
        throw InvalidParams("levels expects one sweep over g");
    const auto gs = sweeps[0].values();
    const DRule rule = c.rule();

    CsvWriter csv({"g/omega_c", "m", "n", "E/omega_c", "phase"});
    long long skipped_unstable = 0;
    for (double g : gs) {
        const ModelParams p = c.params(g, c.omega_b);
        double wx, wy;
        Phase phase = Phase::Normal;
        if (rule.is_rwa()) {
            std::tie(wx, wy) = rwa_frequencies(p);
        } else {
            const auto s = polariton_frequencies(p);
            phase = s.phase;
            if (phase == Phase::Unstable) {
                ++skipped_unstable;
                continue;
            }
            wx = s.omega_x();
            wy = s.omega_y();
        }
        // lowest num_levels ladder states m wx + n wy
        std::vector<std::tuple<double, int, int>> lvls;
        for (int m = 0; m <= c.num_levels; ++m) {
            const int nmax = wy > 1e-12 * wx ? c.num_levels : 0;
            for (int n = 0; n <= nmax; ++n) lvls.emplace_back(wx * m + wy * n, m, n);
        }
        std::stable_sort(lvls.begin(), lvls.end(),
                         [](const auto& a, const auto& b) {
                             return std::get<0>(a) < std::get<0>(b);
                         });
        const int keep = std::min<int>(c.num_levels, int(lvls.size()));
        for (int k = 0; k < keep; ++k) {
            auto [e, m, n] = lvls[k];
            if (!c.shifted) e += (wx + wy) / 2;
            csv.row({g, (long long)m, (long long)n, e / c.omega_c,
                     std::string(to_string(phase))});
        }
    }
    write_atomic(c.out + ".csv", csv.render());
    Json extra;
    extra["skipped_unstable_points"] = skipped_unstable;
    extra["shifted"] = c.shifted;
    write_sidecar(c, c.out + ".csv", csv.size(), extra);
    return 0;
}

// ------------------------------------------------------------------ spectrum

SpectrumResult compute_spectrum(const RunConfig& c, const ModelParams& p,
                                FockProduct state, const FilterConfig& f) {
    if (c.method == "closed" && c.rule().is_rwa()) return ew_spectrum_rwa(p, f);
    if (c.method == "closed") {
        if (state.n == 1 && state.m == 0) return ew_spectrum_closed_10(p, f);
        if (state.n == 0 && state.m == 1) return ew_spectrum_closed_01(p, f);
        throw InvalidParams("closed forms exist for states 10 and 01 only");
    }
    if (c.method == "quadrature") return ew_spectrum_quadrature(p, state, f);
    if (c.method == "stationary") return ew_spectrum_quadrature(p, state, f, true);
    if (c.method == "trapezoid") return ew_spectrum_trapezoid(p, state, f);
    if (c.method == "rwa") return ew_spectrum_rwa(p, f);
    if (c.method == "dsc") return dsc_limit_spectrum(p, f);
    throw InvalidParams("unknown method '" + c.method + "'");
}

Json components_json(const SpectrumResult& s) {
    Json arr = Json::array();
    for (const auto& comp : s.components) {
        Json cj;
        cj["center"] = comp.center;
        cj["weight"] = comp.weight;
        cj["numerator"] = comp.numerator;
        cj["height"] = comp.height;
        arr.push_back(cj);
    }
    return arr;
}

int cmd_spectrum(const RunConfig& c) {
    const FockProduct state = parse_state(c.state);
    const FilterConfig f = c.filter();
    const auto sweeps = c.sweeps();

    if (sweeps.empty()) {
        const ModelParams p = c.params(c.g, c.omega_b);
        const SpectrumResult s = compute_spectrum(c, p, state, f);
        CsvWriter csv({"omega/omega_c", "S"});
        for (std::size_t i = 0; i < s.omega.size(); ++i)
            csv.row({s.omega[i] / c.omega_c, s.values[i]});
        write_atomic(c.out + ".csv", csv.render());
        Json extra;
        extra["components"] = components_json(s);
        extra["critical_dynamics"] = s.critical_dynamics;
        write_sidecar(c, c.out + ".csv", csv.size(), extra);
        return 0;
    }

    if (sweeps.size() != 1 || sweeps[0].var != "omega_b")
        throw InvalidParams("spectrum supports a single omega_b sweep");
    const auto wbs = sweeps[0].values();
    std::vector<double> wb_abs(wbs.size());
    for (std::size_t i = 0; i < wbs.size(); ++i) wb_abs[i] = wbs[i] * c.omega_c;

    const DRule rule = c.rule();
    const auto map = polariton_dispersion_map(c.omega_c, c.g, wb_abs, rule, state, f);

    CsvWriter csv({"omega_b/omega_c", "omega/omega_c", "S"});
    std::map<std::string, long long> phase_count;
    for (std::size_t r = 0; r < map.rows.size(); ++r) {
        ++phase_count[to_string(map.rows[r].phase)];
        for (std::size_t i = 0; i < map.omega_grid.size(); ++i)
            csv.row({wbs[r], map.omega_grid[i] / c.omega_c, map.rows[r].values[i]});
    }
    write_atomic(c.out + ".csv", csv.render());

    CsvWriter disp({"omega_b/omega_c", "omega_x/omega_c", "omega_y/omega_c", "phase"});
    for (std::size_t r = 0; r < map.dispersion.size(); ++r) {
        const auto& d = map.dispersion[r];
        disp.row({wbs[r], d.omega_x / c.omega_c, d.omega_y / c.omega_c,
                  std::string(to_string(d.phase))});
    }
    write_atomic(c.out + "_dispersion.csv", disp.render());

    Json extra;
    extra["phases"] = phase_count;
    extra["outputs_extra"] = Json::array(
        {std::filesystem::path(c.out + "_dispersion.csv").filename().string()});
    write_sidecar(c, c.out + ".csv", csv.size(), extra);
    return 0;
}

// ----------------------------------------------------------------------- vrs

int cmd_vrs(const RunConfig& c) {
    RunConfig cr = c;
    cr.omega_b = c.omega_c;  // the VRS is defined at resonance
    const FilterConfig f = cr.filter();

    struct Curve {
        std::string label;
        std::string method;
        double g;
    };
    std::vector<Curve> curves;
    const auto sweeps = c.sweeps();
    if (!c.curves.empty()) {
        for (const auto& spec : c.curves) {
            const auto colon = spec.find(':');
            if (colon == std::string::npos)
                throw InvalidParams("curve spec must be method:g");
            curves.push_back({spec, spec.substr(0, colon),
                              std::stod(spec.substr(colon + 1))});
        }
    } else if (!sweeps.empty()) {
        if (sweeps.size() != 1 || sweeps[0].var != "g")
            throw InvalidParams("vrs sweeps over g only");
        for (double g : sweeps[0].values())
            curves.push_back({fmt(g), c.method, g});
    } else {
        curves.push_back({fmt(c.g), c.method, c.g});
    }

    std::vector<std::pair<std::vector<double>, VrsAnalysis>> results(curves.size());
    parallel_for(curves.size(), effective_workers(c), [&](std::size_t i) {
        RunConfig cc = cr;
        cc.method = curves[i].method;
        const ModelParams p = cc.params(curves[i].g, cr.omega_c);
        const SpectrumResult s = compute_spectrum(cc, p, {1, 0}, f);
        results[i] = {s.values, vrs_analysis(s)};
    });

    CsvWriter csv({"curve", "g/omega_c", "omega/omega_c", "S"});
    CsvWriter peaks({"curve", "g/omega_c", "n_peaks", "position_left", "height_left",
                     "position_right", "height_right", "splitting", "asymmetry_ratio",
                     "single_peak"});
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const auto& [values, an] = results[i];
        for (std::size_t k = 0; k < f.omega_grid.size(); ++k)
            csv.row({curves[i].label, curves[i].g, f.omega_grid[k] / c.omega_c,
                     values[k]});
        const SpectrumPeak left =
            an.peaks.empty() ? SpectrumPeak{std::nan(""), std::nan("")} : an.peaks.front();
        const SpectrumPeak right =
            an.peaks.empty() ? SpectrumPeak{std::nan(""), std::nan("")} : an.peaks.back();
        peaks.row({curves[i].label, curves[i].g, (long long)an.peaks.size(),
                   left.position, left.height, right.position, right.height,
                   an.splitting, an.asymmetry_ratio,
                   (long long)(an.single_peak ? 1 : 0)});
    }
    write_atomic(c.out + ".csv", csv.render());
    write_atomic(c.out + "_peaks.csv", peaks.render());
    Json extra;
    extra["outputs_extra"] = Json::array(
        {std::filesystem::path(c.out + "_peaks.csv").filename().string()});
    write_sidecar(c, c.out + ".csv", csv.size(), extra);
    return 0;
}

// --------------------------------------------------------------- thermometry

int cmd_thermometry(const RunConfig& c) {
    std::vector<double> gs{c.g}, Ts = c.temperatures;
    for (const auto& ax : c.sweeps()) {
        if (ax.var == "g") gs = ax.values();
        else if (ax.var == "T") Ts = ax.values();
        else throw InvalidParams("thermometry sweeps over g and/or T");
    }
    if (Ts.empty()) throw InvalidParams("thermometry needs --temperature or a T sweep");

    const DRule rule = c.rule();
    const bool critical_rule = rule.kind == DRule::Kind::Zero &&
                               c.omega_b == c.omega_c && c.g1 < 0.0 && c.g2 < 0.0;

    CsvWriter csv({"g/omega_c", "kT/omega_c", "phase", "Z", "U", "C", "qfi", "snr",
                   "delta_t", "branch_x", "branch_y", "pole", "pole_n"});
    const double nan = std::nan("");
    std::map<std::string, long long> phase_count;
    for (double T : Ts) {
        std::vector<SnrPoint> crit;
        if (critical_rule)
            crit = snr_curve(c.omega_c, T * c.omega_c, gs, c.n_measurements);
        for (std::size_t i = 0; i < gs.size(); ++i) {
            const ModelParams p = c.params(gs[i], c.omega_b);
            const Phase phase = polariton_frequencies(p).phase;
            ++phase_count[to_string(phase)];
            double Z = nan, U = nan, C = nan, qfi = nan, snr = nan, dt = nan;
            std::string bx = "hyperbolic", by = "hyperbolic";
            long long pole = 0, pole_n = 0;
            if (phase == Phase::Normal) {
                const ThermoPoint pt = thermo_point(p, T * c.omega_c);
                Z = pt.Z;
                U = pt.U;
                C = pt.C;
                qfi = pt.qfi;
                snr = pt.snr;
                dt = 1.0 / std::sqrt(double(c.n_measurements) * pt.qfi);
            }
            if (critical_rule) {
                const SnrPoint& sp = crit[i];
                qfi = sp.qfi;
                snr = sp.snr;
                dt = sp.delta_t;
                bx = to_string(sp.branch_x);
                by = to_string(sp.branch_y);
                pole = sp.pole ? 1 : 0;
                pole_n = sp.pole_index;
            }
            csv.row({gs[i], T, std::string(to_string(phase)), Z, U, C, qfi, snr, dt,
                     bx, by, pole, pole_n});
        }
    }
    write_atomic(c.out + ".csv", csv.render());
    Json extra;
    extra["phases"] = phase_count;
    extra["critical_rule"] = critical_rule;
    extra["n_measurements"] = c.n_measurements;
    write_sidecar(c, c.out + ".csv", csv.size(), extra);
    return 0;
}

// ------------------------------------------------------------------ validate

struct Check {
    std::string suite;
    std::string name;
    double value;
    double tolerance;
    bool pass;
};

void model_suite(const RunConfig& c, std::vector<Check>& checks) {
    // deterministic anisotropic sampler in the oracle's identified regime
    std::mt19937_64 rng(20260809ull);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<ModelParams> pts;
    while (int(pts.size()) < c.points) {
        ModelParams p{1.0, 0.7 + 0.8 * u(rng), 0.5 * u(rng), 0.5 * u(rng),
                      0.25 * u(rng)};
        if (std::abs(p.lambda2()) >= 0.9) continue;
        const auto s = polariton_frequencies(p);
        if (s.phase != Phase::Normal) continue;
        if (s.omega_x() >= 2.8 * s.omega_y()) continue;
        pts.push_back(p);
    }
    std::vector<double> errs(pts.size());
    parallel_for(pts.size(), effective_workers(c), [&](std::size_t i) {
        const auto s = polariton_frequencies(pts[i]);
        const auto g = oracle::lowest_gaps(pts[i], c.cutoff);
        errs[i] = std::max(std::abs(g.omega_y - s.omega_y()) / s.omega_y(),
                           std::abs(g.omega_x - s.omega_x()) / s.omega_x());
    });
    const double worst = *std::max_element(errs.begin(), errs.end());
    checks.push_back({"model", "fock_gap_match_rel", worst, 1e-6, worst < 1e-6});

    // representation equivalence at a small cutoff
    const ModelParams p{1.0, 1.2, 0.35, 0.2, 0.1};
    const auto er = oracle::eigenspectrum(oracle::build_rotated_dense(p, 16));
    const auto eo = oracle::eigenspectrum(oracle::build_original_dense(p, 16));
    double dev = 0.0;
    for (std::size_t k = 0; k < std::min<std::size_t>(60, er.size()); ++k)
        dev = std::max(dev, std::abs(er[k] - eo[k]));
    checks.push_back({"model", "representation_equivalence", dev, 1e-10, dev < 1e-10});

    // TRK product identity over the coupling sweep
    double trk_dev = 0.0;
    for (double g = 0.0; g <= 3.0001; g += 0.01) {
        const auto s = polariton_frequencies(ModelParams::resonant_trk(g));
        trk_dev = std::max(trk_dev, std::abs(s.omega_x() * s.omega_y() - 1.0));
    }
    checks.push_back({"model", "trk_product_identity", trk_dev, 1e-10, trk_dev < 1e-10});
}

void dynamics_suite(const RunConfig& c, std::vector<Check>& checks) {
    std::vector<double> ts;
    for (double t = 0.0; t <= 50.0001; t += 0.5) ts.push_back(t);
    for (double g : {0.1, 0.35}) {
        const ModelParams p = ModelParams::resonant_trk(g);
        oracle::HeisenbergPropagator prop(p, c.dyn_cutoff);
        const auto fo = prop.field_coeffs(ts);
        const FieldEvolution fa(p);
        double sup = 0.0, comm = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const auto fk = fa.coeffs(ts[k]);
            for (int j = 0; j < 4; ++j) sup = std::max(sup, std::abs(fo[j][k] - fk[j]));
            comm = std::max(comm, std::abs(std::norm(fk[0]) - std::norm(fk[1]) +
                                           std::norm(fk[2]) - std::norm(fk[3]) - 1.0));
        }
        const std::string tag = g < 0.2 ? "_g0.10" : "_g0.35";
        checks.push_back({"dynamics", "fock_fj_match" + tag, sup, 1e-6, sup < 1e-6});
        checks.push_back({"dynamics", "commutator" + tag, comm, 1e-10, comm < 1e-10});
        checks.push_back({"dynamics", "truncation_leak" + tag,
                          prop.leak().max_population, 1e-8, !prop.leak().warning});
    }
}

void spectrum_suite(const RunConfig& c, std::vector<Check>& checks) {
    const FilterConfig f = make_filter(c.gamma, 10.0 / c.gamma, 3.0, 1201);
    for (double g : {0.1, 0.35}) {
        const ModelParams p = ModelParams::resonant_trk(g);
        for (FockProduct st : {FockProduct{1, 0}, FockProduct{0, 1}}) {
            const auto exact = ew_spectrum_quadrature(p, st, f);
            const auto trap = ew_spectrum_trapezoid(p, st, f, 1e-7);
            double sup = 0.0, ref = 0.0;
            for (std::size_t i = 0; i < exact.values.size(); ++i) {
                sup = std::max(sup, std::abs(exact.values[i] - trap.values[i]));
                ref = std::max(ref, exact.values[i]);
            }
            const std::string tag = std::string("_") + (st.n ? "10" : "01") +
                                    (g < 0.2 ? "_g0.10" : "_g0.35");
            checks.push_back({"spectrum", "separable_vs_trapezoid" + tag, sup / ref,
                              1e-5, sup / ref < 1e-5});
        }
    }
    // direct 2-D double integral at a few filter frequencies
    const ModelParams p = ModelParams::resonant_trk(0.2);
    FilterConfig fd = make_filter(c.gamma, 25.0, 3.0, 1201);
    const std::vector<double> omegas{0.9, 1.1, 2.0};
    const auto direct = ew_spectrum_2d_direct(p, {1, 0}, fd, omegas, 1500);
    const auto exact = ew_spectrum_quadrature(p, {1, 0}, fd);
    double dev = 0.0;
    for (std::size_t k = 0; k < omegas.size(); ++k) {
        const auto it = std::lower_bound(fd.omega_grid.begin(), fd.omega_grid.end(),
                                         omegas[k] - 1e-9);
        const double ref = exact.values[it - fd.omega_grid.begin()];
        dev = std::max(dev, std::abs(direct[k] - ref) / ref);
    }
    checks.push_back({"spectrum", "filter_integral_2d_direct", dev, 5e-3, dev < 5e-3});

    // stationary limit vs printed closed forms: the difference at each line
    // center must equal the weight of the vacuum product each form drops
    const ModelParams q = ModelParams::resonant_trk(0.35);
    const FilterConfig fg = make_filter(c.gamma, 200.0, 3.0, 3001);
    const MuMatrix m = mu_coefficients(q);
    const auto ix = std::size_t(m.omega_x / 3.0 * 3000 + 0.5);
    {
        const auto st = ew_spectrum_quadrature(q, {1, 0}, fg, true);
        const auto cl = ew_spectrum_closed_10(q, fg);
        const double predicted =
            2 * c.gamma * std::norm(m.mu[3][1]) / (c.gamma * c.gamma);
        const double rel = std::abs(st.values[ix] - cl.values[ix] - predicted) / predicted;
        checks.push_back({"spectrum", "closed10_gap_is_dropped_term", rel, 0.05,
                          rel < 0.05});
    }
    {
        const auto st = ew_spectrum_quadrature(q, {0, 1}, fg, true);
        const auto cl = ew_spectrum_closed_01(q, fg);
        const double predicted =
            2 * c.gamma * std::norm(m.mu[1][1]) / (c.gamma * c.gamma);
        const double rel = std::abs(st.values[ix] - cl.values[ix] - predicted) / predicted;
        checks.push_back({"spectrum", "closed01_gap_is_dropped_term", rel, 0.05,
                          rel < 0.05});
    }
}

void thermometry_suite(const RunConfig&, std::vector<Check>& checks) {
    double ladder_dev = 0.0, identity_dev = 0.0;
    for (double T : {0.1, 0.5, 2.0}) {
        const ModelParams p{1.0, 1.0, 0.3, 0.3, 0.09};
        const auto lad = oracle::ladder_thermo(p, T);
        const auto pt = thermo_point(p, T);
        ladder_dev = std::max({ladder_dev, std::abs(lad.Z - pt.Z) / pt.Z,
                               std::abs(lad.U - pt.U) / std::abs(pt.U),
                               std::abs(lad.C - pt.C) / pt.C});
        identity_dev =
            std::max(identity_dev, std::abs(pt.qfi - pt.C / (T * T)) / pt.qfi);
    }
    checks.push_back({"thermometry", "ladder_vs_closed", ladder_dev, 1e-10,
                      ladder_dev < 1e-10});
    checks.push_back({"thermometry", "qfi_heat_capacity_identity", identity_dev, 1e-12,
                      identity_dev < 1e-12});

    // continued-QFI poles: numerical bracketing of sin(arg) = 0 vs the locus
    double pole_dev = 0.0;
    for (double T : {0.05, 0.1}) {
        for (int n = 1; n <= 3; ++n) {
            const double locus = qfi_pole_locus(1.0, T, n);
            auto sin_arg = [&](double g) {
                return std::sin(std::sqrt(2.0 * g - 1.0) / (2.0 * T));
            };
            double lo = locus - 5e-3, hi = locus + 5e-3;
            if (sin_arg(lo) * sin_arg(hi) >= 0.0) throw Error("pole bracketing failed");
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                (sin_arg(lo) * sin_arg(mid) <= 0.0 ? hi : lo) = mid;
            }
            pole_dev = std::max(pole_dev, std::abs(0.5 * (lo + hi) - locus));
        }
    }
    checks.push_back({"thermometry", "pole_locus_bracketing", pole_dev, 1e-8,
                      pole_dev < 1e-8});

    const double dk = dicke_equilibrium_critical_coupling(1.0, 1.0, 1e-4);
    checks.push_back({"thermometry", "dicke_zero_T_limit", std::abs(dk - 0.5), 1e-6,
                      std::abs(dk - 0.5) < 1e-6});
}

int cmd_validate(const RunConfig& c) {
    std::vector<Check> checks;
    const std::set<std::string> suites = [&] {
        if (c.suite == "all")
            return std::set<std::string>{"model", "dynamics", "spectrum", "thermometry"};
        return std::set<std::string>{c.suite};
    }();
    if (suites.count("model")) model_suite(c, checks);
    if (suites.count("dynamics")) dynamics_suite(c, checks);
    if (suites.count("spectrum")) spectrum_suite(c, checks);
    if (suites.count("thermometry")) thermometry_suite(c, checks);
    if (checks.empty()) throw InvalidParams("unknown suite '" + c.suite + "'");

    CsvWriter csv({"suite", "check", "value", "tolerance", "pass"});
    bool all_pass = true;
    Json summary = Json::array();
    for (const auto& k : checks) {
        csv.row({k.suite, k.name, k.value, k.tolerance, (long long)(k.pass ? 1 : 0)});
        all_pass = all_pass && k.pass;
        Json cj;
        cj["suite"] = k.suite;
        cj["check"] = k.name;
        cj["max_deviation"] = k.value;
        cj["tolerance"] = k.tolerance;
        cj["pass"] = k.pass;
        summary.push_back(cj);
    }
    write_atomic(c.out + ".csv", csv.render());
    Json extra;
    extra["validation"]["all_pass"] = all_pass;
    extra["validation"]["cutoff"] = c.cutoff;
    extra["validation"]["dyn_cutoff"] = c.dyn_cutoff;
    extra["validation"]["checks"] = summary;
    write_sidecar(c, c.out + ".csv", csv.size(), extra);
    if (!all_pass) std::cerr << "validation FAILED, see " << c.out << ".json\n";
    return all_pass ? 0 : 4;
}

// ------------------------------------------------------------------- presets

void apply_preset(RunConfig& c, const std::map<std::string, bool>& user_set) {
    auto sweep_default = [&](std::vector<std::vector<std::string>> v) {
        if (!user_set.at("sweep")) c.sweeps_raw = std::move(v);
    };
    const std::string& p = c.preset;
    if (p.empty()) return;
    if (p == "fig1a") {
        if (c.command != "polaritons") throw InvalidParams("fig1a is a polaritons preset");
        sweep_default({{"g", "0", "3", "301"}});
        if (c.families.empty()) c.families = {"trk", "zero", "rwa"};
    } else if (p == "fig1b" || p == "fig1c" || p == "fig1d") {
        if (c.command != "levels") throw InvalidParams(p + " is a levels preset");
        sweep_default({{"g", "0", "3", "301"}});
        if (!user_set.at("d-rule"))
            c.d_rule = p == "fig1b" ? "trk" : (p == "fig1c" ? "zero" : "rwa");
    } else if (p == "fig2a" || p == "fig2b" || p == "fig2c" || p == "fig2d") {
        if (c.command != "spectrum") throw InvalidParams(p + " is a spectrum preset");
        sweep_default({{"omega_b", "0.1", "5", "246"}});
        if (!user_set.at("g")) c.g = (p == "fig2a" || p == "fig2c") ? 0.1 : 0.35;
        if (c.state == "10" && (p == "fig2c" || p == "fig2d")) c.state = "01";
        c.method = "closed";
    } else if (p == "fig3a") {
        if (c.command != "vrs") throw InvalidParams("fig3a is a vrs preset");
        sweep_default({{"g", "0.01", "1.2", "120"}});
    } else if (p == "fig3b") {
        if (c.command != "vrs") throw InvalidParams("fig3b is a vrs preset");
        if (c.curves.empty())
            c.curves = {"closed:0.1", "closed:0.35", "closed:1.0", "rwa:0.35"};
    } else if (p == "fig4a") {
        if (c.command != "thermometry") throw InvalidParams("fig4a is a thermometry preset");
        sweep_default({{"g", "0.02", "2", "100"}, {"T", "0.01", "1", "100"}});
    } else if (p == "fig4b") {
        if (c.command != "thermometry") throw InvalidParams("fig4b is a thermometry preset");
        sweep_default({{"g", "0.001", "1", "2000"}});
        if (!user_set.at("d-rule")) c.d_rule = "zero";
        if (c.temperatures.empty()) c.temperatures = {0.05, 0.1};
    } else {
        throw InvalidParams("unknown preset '" + p + "'");
    }
}

}  // namespace
}  // namespace cli

int run_cli(int argc, char** argv) {
    using namespace cli;
    RunConfig c;

    CLI::App app{"Exact polariton spectra, physical spectra and critical quantum "
                 "thermometry of the anisotropic Hopfield model"};
    app.require_subcommand(1);

    std::map<std::string, CLI::App*> subs;
    for (const char* name :
         {"polaritons", "levels", "spectrum", "vrs", "thermometry", "validate"})
        subs[name] = app.add_subcommand(name);

    std::map<std::string, std::map<std::string, CLI::Option*>> opts;
    for (auto& [name, sub] : subs) {
        auto& o = opts[name];
        o["omega-c"] = sub->add_option("--omega-c", c.omega_c, "field frequency");
        o["omega-b"] = sub->add_option("--omega-b", c.omega_b, "matter frequency");
        o["resonance"] = sub->add_flag("--resonance", c.resonance,
                                       "set omega_b = omega_c");
        o["g"] = sub->add_option("--g", c.g, "coupling g1 = g2 = g");
        o["g1"] = sub->add_option("--g1", c.g1, "corotating coupling");
        o["g2"] = sub->add_option("--g2", c.g2, "counterrotating coupling");
        o["d-rule"] = sub->add_option("--d-rule", c.d_rule,
                                      "trk | zero | rwa | scaled:<d> | explicit:<D>");
        o["gamma"] = sub->add_option("--gamma", c.gamma, "filter half-width");
        o["t-obs"] = sub->add_option("--t-obs", c.t_obs, "observation time");
        o["temperature"] = sub->add_option("--temperature", c.temperatures,
                                           "temperature(s) kT/omega_c");
        o["sweep"] = sub->add_option("--sweep", c.sweeps_raw,
                                     "<var> <start> <stop> <count> [linear|log]")
                         ->expected(4, 5);
        o["workers"] = sub->add_option("--workers", c.workers, "sweep parallelism");
        o["out"] = sub->add_option("--out", c.out, "output path prefix");
        o["preset"] = sub->add_option("--preset", c.preset, "figure recipe");
        o["omega-max"] = sub->add_option("--omega-max", c.omega_max, "grid upper edge");
        o["omega-points"] = sub->add_option("--omega-points", c.omega_points,
                                            "grid size");
    }
    subs["spectrum"]->add_option("--state", c.state,
                                 "initial Fock product (10, 01 or n,m)");
    subs["spectrum"]->add_option("--method", c.method,
                                 "closed | quadrature | stationary | trapezoid | rwa | dsc");
    subs["vrs"]->add_option("--method", c.method,
                            "closed | rwa | quadrature | stationary");
    subs["vrs"]->add_option("--curve", c.curves, "method:g curve spec, repeatable");
    subs["levels"]->add_option("--num-levels", c.num_levels, "ladder states per point");
    subs["levels"]->add_flag("!--no-shifted", c.shifted,
                             "keep the zero-point energy in E_mn");
    subs["polaritons"]
        ->add_option("--families", c.families, "d-rule list emitted side by side")
        ->delimiter(',');
    subs["thermometry"]->add_option("--n-measurements", c.n_measurements,
                                    "Cramer-Rao measurement count");
    subs["validate"]->add_option("--suite", c.suite,
                                 "all | model | dynamics | spectrum | thermometry");
    subs["validate"]->add_option("--cutoff", c.cutoff,
                                 "Fock cutoff for the model suite");
    subs["validate"]->add_option("--dyn-cutoff", c.dyn_cutoff,
                                 "Fock cutoff for the dynamics suite");
    subs["validate"]->add_option("--points", c.points, "random parameter points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        Json err;
        err["error"]["type"] = "ConfigError";
        err["error"]["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        c.command = sub->get_name();
        std::map<std::string, bool> user_set;
        for (auto& [key, opt] : opts[c.command]) user_set[key] = opt->count() > 0;
        apply_preset(c, user_set);
        if (c.resonance) c.omega_b = c.omega_c;
        if (c.out.empty()) c.out = "out/" + (c.preset.empty() ? c.command : c.preset);
        if (c.command == "thermometry" && c.temperatures.empty()) {
            bool has_T_sweep = false;
            for (const auto& ax : c.sweeps())
                if (ax.var == "T") has_T_sweep = true;
            if (!has_T_sweep) c.temperatures = {0.1};
        }
        ModelParams{c.omega_c, c.omega_b}.validate();

        if (c.command == "polaritons") return cmd_polaritons(c);
        if (c.command == "levels") return cmd_levels(c);
        if (c.command == "spectrum") return cmd_spectrum(c);
        if (c.command == "vrs") return cmd_vrs(c);
        if (c.command == "thermometry") return cmd_thermometry(c);
        if (c.command == "validate") return cmd_validate(c);
        throw InvalidParams("unknown command");
    } catch (const InvalidParams& e) {
        Json err;
        err["error"]["type"] = "ConfigError";
        err["error"]["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        Json err;
        err["error"]["type"] = "ComputationError";
        err["error"]["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 3;
    }
}
