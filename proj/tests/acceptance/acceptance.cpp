// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Criterion 10 needs the CLI binary path as argv[1].

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hopfield/oracle.hpp"
#include "hopfield/spectrum.hpp"
#include "hopfield/thermometry.hpp"

using namespace hopfield;

namespace {

struct Criterion {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        notes.push_back(std::string(ok ? "  ok   " : "  FAIL ") + what);
    }
    void info(const std::string& what) { notes.push_back("  info " + what); }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double sup_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::abs(a[i] - b[i]));
        den = std::max(den, std::abs(b[i]));
    }
    return num / den;
}

// ---------------------------------------------------------------------------
// 1. Polariton curve families over g in [0, 3]

void criterion_1(Criterion& c) {
    double trk_dev = 0.0, rwa_dev = 0.0;
    for (int i = 0; i <= 300; ++i) {
        const double g = 0.01 * i;
        const auto st = polariton_frequencies(ModelParams::resonant_trk(g));
        trk_dev = std::max(trk_dev, std::abs(st.omega_x() * st.omega_y() - 1.0));
        const auto [rx, ry] = rwa_frequencies({1.0, 1.0, g, 0.0, 0.0});
        rwa_dev = std::max({rwa_dev, std::abs(rx - (1.0 + g)), std::abs(ry - (1.0 - g))});
    }
    c.require(trk_dev < 1e-10, "TRK product identity, max dev " + fmt(trk_dev));
    c.require(rwa_dev < 1e-10, "RWA branches exactly 1 +- g, max dev " + fmt(rwa_dev));

    // root of the D = 0 lower branch
    auto wy2 = [](double g) {
        return polariton_frequencies({1.0, 1.0, g, g, 0.0}).omega_y_sq;
    };
    double lo = 0.4, hi = 0.6;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        (wy2(mid) > 0.0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    c.require(std::abs(root - 0.5) < 1e-10,
              "D=0 lower branch hits zero at g = " + fmt(root));
}

// ---------------------------------------------------------------------------
// 2. Truncated-Fock lowest gaps at cutoff 150 for 20 random points

void criterion_2(Criterion& c) {
    std::mt19937_64 rng(20260809ull);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<ModelParams> pts;
    while (pts.size() < 20) {
        ModelParams p{1.0, 0.7 + 0.8 * u(rng), 0.5 * u(rng), 0.5 * u(rng),
                      0.25 * u(rng)};
        if (std::abs(p.lambda2()) >= 0.9) continue;
        const auto s = polariton_frequencies(p);
        if (s.phase != Phase::Normal) continue;
        // keep the one-quantum states below the three-quantum ladder so the
        // two lowest odd-sector gaps are (omega_y, omega_x)
        if (s.omega_x() >= 2.8 * s.omega_y()) continue;
        pts.push_back(p);
    }
    double worst = 0.0;
    for (const auto& p : pts) {
        const auto s = polariton_frequencies(p);
        const auto g = oracle::lowest_gaps(p, 150);
        worst = std::max({worst, std::abs(g.omega_y - s.omega_y()) / s.omega_y(),
                          std::abs(g.omega_x - s.omega_x()) / s.omega_x()});
    }
    c.require(worst < 1e-6, "20-point gap match at N=150, worst rel " + fmt(worst));
}

// ---------------------------------------------------------------------------
// 3. Converged low-lying ladder at g = 1.5 and 3: no avoided crossings,
//    constant spacing omega_x

void criterion_3(Criterion& c) {
    for (double g : {1.5, 3.0}) {
        const ModelParams p = ModelParams::resonant_trk(g);
        const auto s = polariton_frequencies(p);
        const double wx = s.omega_x(), wy = s.omega_y();
        const auto fine = oracle::truncated_eigenvalues(p, 150);
        const auto coarse = oracle::truncated_eigenvalues(p, 140);
        const double e0 = fine[0];
        const double window = 2.2 * wx;

        std::vector<double> conv;
        for (double e : fine) {
            if (e - e0 > window) break;
            auto it = std::lower_bound(coarse.begin(), coarse.end(), e);
            double d = std::numeric_limits<double>::infinity();
            if (it != coarse.end()) d = std::min(d, std::abs(*it - e));
            if (it != coarse.begin()) d = std::min(d, std::abs(*std::prev(it) - e));
            if (d < 1e-8) conv.push_back(e);
        }
        const int nmax = int(window / wy) + 2;
        double ladder_dev = 0.0;
        for (double e : conv) {
            const double gap = e - e0;
            double best = std::numeric_limits<double>::infinity();
            for (int m = 0; m <= 3; ++m)
                for (int n = 0; n <= nmax; ++n)
                    best = std::min(best, std::abs(gap - (m * wx + n * wy)));
            ladder_dev = std::max(ladder_dev, best);
        }
        c.require(ladder_dev < 1e-6,
                  "g=" + fmt(g) + ": " + std::to_string(conv.size()) +
                      " converged levels sit on the ladder, max dev " + fmt(ladder_dev));

        auto slot = [&](double target) -> double {
            double best = std::numeric_limits<double>::infinity(), val = 0.0;
            for (double e : conv)
                if (std::abs(e - e0 - target) < best) {
                    best = std::abs(e - e0 - target);
                    val = e - e0;
                }
            return best < 1e-6 ? val : std::nan("");
        };
        const double e1 = slot(wx), e2 = slot(2 * wx);
        const bool spacing_ok = std::isfinite(e1) && std::isfinite(e2) &&
                                std::abs((e2 - e1) - e1) < 1e-6;
        c.require(spacing_ok, "g=" + fmt(g) + ": spacing along m constant = omega_x, " +
                                  "|(E2-E1)-(E1-E0)| = " +
                                  fmt(std::isfinite(e2) ? std::abs(e2 - 2 * e1) : -1.0));
    }
}

// ---------------------------------------------------------------------------
// 4. f_j(t) against Heisenberg propagation at cutoff 120

void criterion_4(Criterion& c) {
    std::vector<double> ts;
    for (int i = 0; i <= 500; ++i) ts.push_back(0.1 * i);
    for (double g : {0.1, 0.35}) {
        const ModelParams p = ModelParams::resonant_trk(g);
        oracle::HeisenbergPropagator prop(p, 120);
        const auto fo = prop.field_coeffs(ts);
        const FieldEvolution fa(p);
        double sup = 0.0, comm = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const auto fk = fa.coeffs(ts[k]);
            for (int j = 0; j < 4; ++j) sup = std::max(sup, std::abs(fo[j][k] - fk[j]));
            comm = std::max(comm, std::abs(std::norm(fk[0]) - std::norm(fk[1]) +
                                           std::norm(fk[2]) - std::norm(fk[3]) - 1.0));
        }
        c.require(sup < 1e-6, "g=" + fmt(g) + ": sup |f_oracle - f_closed| = " + fmt(sup));
        c.require(comm < 1e-10, "g=" + fmt(g) + ": commutator invariant dev " + fmt(comm));
    }
}

// ---------------------------------------------------------------------------
// 5. Exact filter-integral quadrature vs the long-time closed forms

void criterion_5(Criterion& c) {
    const double G = 0.05;
    const FilterConfig f = make_filter(G, 10.0 / G, 3.0, 3001);
    for (double g : {0.1, 0.35}) {
        const ModelParams p = ModelParams::resonant_trk(g);
        const auto cl10 = ew_spectrum_closed_10(p, f);
        const auto cl01 = ew_spectrum_closed_01(p, f);
        for (int state01 = 0; state01 < 2; ++state01) {
            const FockProduct st = state01 ? FockProduct{0, 1} : FockProduct{1, 0};
            const auto& cl = state01 ? cl01 : cl10;
            const auto quad = ew_spectrum_quadrature(p, st, f);
            const double dev = sup_rel_diff(quad.values, cl.values);
            c.require(dev < 0.02, std::string("state ") + (state01 ? "01" : "10") +
                                      ", g=" + fmt(g) + ": sup-norm rel diff " + fmt(dev));
            const auto stat = ew_spectrum_quadrature(p, st, f, true);
            c.info(std::string("state ") + (state01 ? "01" : "10") + ", g=" + fmt(g) +
                   ": stationary-limit diff " + fmt(sup_rel_diff(stat.values, cl.values)) +
                   " (finite-t beating at fixed t_obs does not decay with t)");
        }
    }
}

// ---------------------------------------------------------------------------
// 6. VRS asymmetry and the single-Lorentzian limit

void criterion_6(Criterion& c) {
    const double G = 0.05;
    const FilterConfig f = make_filter(G, 200.0, 3.0, 3001);
    std::vector<double> ratios;
    for (double g : {0.1, 0.35, 1.0}) {
        const auto an = vrs_analysis(ew_spectrum_closed_10(ModelParams::resonant_trk(g), f));
        ratios.push_back(an.asymmetry_ratio);
    }
    c.require(ratios[0] < ratios[1] && ratios[1] < ratios[2],
              "asymmetry ratios increase: " + fmt(ratios[0]) + " < " + fmt(ratios[1]) +
                  " < " + fmt(ratios[2]));

    const auto rwa = vrs_analysis(ew_spectrum_rwa({1.0, 1.0, 0.35, 0.35, 0.0}, f));
    c.require(std::abs(rwa.asymmetry_ratio - 1.0) <= 1e-6,
              "RWA spectrum ratio = 1, dev " + fmt(std::abs(rwa.asymmetry_ratio - 1.0)));

    // DSC single Lorentzian vs the full two-Lorentzian closed form near its peak
    const ModelParams p1 = ModelParams::resonant_trk(1.0);
    const double wt = 2.0;  // 2 g sqrt(omega_c/omega_b)
    FilterConfig win;
    win.gamma = G;
    win.t_obs = 200.0;
    win.omega_grid.resize(2001);
    for (int i = 0; i < 2001; ++i)
        win.omega_grid[i] = wt - 10 * G + 20.0 * G * i / 2000.0;
    const auto s8 = dsc_limit_spectrum(p1, win);
    const auto s5 = ew_spectrum_closed_10(p1, win);
    const double dev = sup_rel_diff(s8.values, s5.values);
    c.require(dev < 0.05,
              "g=1: DSC Lorentzian vs closed form near omega~ = 2g, sup-norm rel diff " +
                  fmt(dev));
    const auto full = vrs_analysis(ew_spectrum_closed_10(p1, f));
    c.info("g=1 subdominant/dominant peak height = " +
           fmt(1.0 / full.asymmetry_ratio) +
           " (the spectrum itself is single-Lorentzian-like to < 5%)");
}

// ---------------------------------------------------------------------------
// 7. Thermometry identities and limits

void criterion_7(Criterion& c) {
    double identity_dev = 0.0;
    for (double g : {0.05, 0.2, 0.35, 0.6, 1.0})
        for (double T : {0.05, 0.2, 1.0, 5.0}) {
            const auto pt = thermo_point(ModelParams::resonant_trk(g), T);
            identity_dev = std::max(identity_dev,
                                    std::abs(pt.qfi - pt.C / (T * T)) / pt.qfi);
        }
    c.require(identity_dev < 1e-12, "F = C/T^2 on the (g,T) grid, max rel dev " +
                                        fmt(identity_dev));

    double ladder_dev = 0.0;
    for (double T : {0.1, 0.5, 2.0}) {
        const ModelParams p{1.0, 1.0, 0.3, 0.3, 0.09};
        const auto lad = oracle::ladder_thermo(p, T);
        const auto pt = thermo_point(p, T);
        ladder_dev = std::max({ladder_dev, std::abs(lad.Z - pt.Z) / pt.Z,
                               std::abs(lad.U - pt.U) / std::abs(pt.U),
                               std::abs(lad.C - pt.C) / pt.C});
    }
    c.require(ladder_dev < 1e-10, "closed forms vs ladder sums, max rel dev " +
                                      fmt(ladder_dev));

    double limit_dev = 0.0;
    for (double g : {0.1, 0.5}) {
        const ModelParams p = ModelParams::resonant_trk(g);
        const double T = 50.0 * polariton_frequencies(p).omega_x();
        const auto pt = thermo_point(p, T);
        limit_dev = std::max({limit_dev, std::abs(pt.C - 2.0) / 2.0,
                              std::abs(pt.qfi - 2.0 / (T * T)) / (2.0 / (T * T))});
    }
    c.require(limit_dev < 0.01, "high-T limits C -> 2, F -> 2/T^2, dev " + fmt(limit_dev));
}

// ---------------------------------------------------------------------------
// 8. Periodic QFI divergences of the D = 0 continuation

void criterion_8(Criterion& c) {
    double locus_dev = 0.0;
    for (double T : {0.05, 0.1})
        for (int n = 1; n <= 5; ++n) {
            const double locus = qfi_pole_locus(1.0, T, n);
            auto sin_arg = [&](double g) {
                return std::sin(std::sqrt(2.0 * g - 1.0) / (2.0 * T));
            };
            double lo = locus - 5e-3, hi = locus + 5e-3;
            if (sin_arg(lo) * sin_arg(hi) >= 0.0) {
                c.require(false, "bracketing failed at T=" + fmt(T) + " n=" +
                                     std::to_string(n));
                return;
            }
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                (sin_arg(lo) * sin_arg(mid) <= 0.0 ? hi : lo) = mid;
            }
            locus_dev = std::max(locus_dev, std::abs(0.5 * (lo + hi) - locus));
        }
    c.require(locus_dev < 1e-8,
              "poles at g = 1/2 + 2(T n pi)^2 for n=1..5, max dev " + fmt(locus_dev));

    double flat_dev = 0.0;
    for (double T : {1e-3, 3e-3, 1e-2}) {
        const auto q = qfi_critical_d0(1.0, 0.5, T);
        flat_dev = std::max(flat_dev, std::abs(q.qfi * T * T - 1.0));
    }
    c.require(flat_dev < 0.01,
              "qfi T^2 constant at g_crit for T in [1e-3, 1e-2], dev " + fmt(flat_dev));
}

// ---------------------------------------------------------------------------
// 9. Dicke finite-temperature critical coupling

void criterion_9(Criterion& c) {
    double dev = 0.0;
    for (auto [wc, wz] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {1.0, 3.0}}) {
        const double expect = std::sqrt(wc * wz) / 2.0;
        const double got = dicke_equilibrium_critical_coupling(wc, wz, 1e-4);
        dev = std::max(dev, std::abs(got - expect) / expect);
    }
    c.require(dev < 1e-6, "lambda_c(T=1e-4) -> sqrt(omega_c omega_z)/2, rel dev " +
                              fmt(dev));
}

// ---------------------------------------------------------------------------
// 10. Determinism of the validate pipeline

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void criterion_10(Criterion& c, const std::string& cli) {
    if (cli.empty()) {
        c.require(false, "CLI binary path not supplied");
        return;
    }
    const std::string base = std::filesystem::temp_directory_path() /
                             "hopfield_acceptance";
    std::filesystem::remove_all(base);
    // identical config both times, capture the bytes after each run
    std::string csv[2], json[2], fig[2];
    for (int run = 0; run < 2; ++run) {
        const std::string cmd = cli + " validate --suite all --out " + base +
                                "/validate > /dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        c.require(rc == 0, "validate --suite all run " + std::to_string(run + 1) +
                               " exits 0 (got " + std::to_string(rc) + ")");
        csv[run] = slurp(base + "/validate.csv");
        json[run] = slurp(base + "/validate.json");
        (void)std::system((cli + " polaritons --preset fig1a --out " + base +
                           "/fig1a > /dev/null 2>&1")
                              .c_str());
        fig[run] = slurp(base + "/fig1a.csv");
    }
    c.require(!csv[0].empty() && csv[0] == csv[1],
              "validate outputs byte-identical (.csv)");
    c.require(!json[0].empty() && json[0] == json[1],
              "validate outputs byte-identical (.json)");
    c.require(!fig[0].empty() && fig[0] == fig[1], "fig1a dataset byte-identical");
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    int only = argc > 2 ? std::atoi(argv[2]) : 0;

    struct Entry {
        int id;
        const char* name;
        double budget_s;  // 0: no stated bound
        std::function<void(Criterion&)> fn;
    };
    const std::vector<Entry> entries{
        {1, "polariton curve families (Fig. 1a)", 1.0, criterion_1},
        {2, "oracle eigenvalue match, 20 points at N=150", 300.0, criterion_2},
        {3, "energy-ladder structure at g=1.5, 3 (Fig. 1b)", 0.0, criterion_3},
        {4, "dynamics vs Heisenberg propagation at N=120", 0.0, criterion_4},
        {5, "spectrum closed form vs quadrature", 60.0, criterion_5},
        {6, "VRS asymmetry & single-Lorentzian limit (Fig. 3b)", 0.0, criterion_6},
        {7, "thermometry identities and limits", 0.0, criterion_7},
        {8, "critical QFI divergences (Fig. 4b)", 0.0, criterion_8},
        {9, "Dicke finite-T critical coupling", 0.0, criterion_9},
        {10, "determinism of validate datasets", 0.0,
         [&cli](Criterion& c) { criterion_10(c, cli); }},
    };

    int failures = 0;
    for (const auto& e : entries) {
        if (only != 0 && e.id != only) continue;
        Criterion c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            e.fn(c);
        } catch (const std::exception& ex) {
            c.require(false, std::string("exception: ") + ex.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (e.budget_s > 0.0)
            c.require(secs < e.budget_s, "runtime " + fmt(secs) + " s < " +
                                             fmt(e.budget_s) + " s");
        std::printf("[%s] criterion %2d: %s (%.1f s)\n", c.pass ? "PASS" : "FAIL",
                    e.id, e.name, secs);
        for (const auto& n : c.notes) std::printf("%s\n", n.c_str());
        if (!c.pass) ++failures;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
