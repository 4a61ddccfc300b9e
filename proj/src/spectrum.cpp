#include "hopfield/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hopfield {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::array<double, 4> state_weights(FockProduct s) {
    if (s.n < 0 || s.m < 0) throw InvalidParams("Fock occupations must be >= 0");
    return {double(s.n), double(s.n) + 1.0, double(s.m), double(s.m) + 1.0};
}

struct ClosedFormInputs {
    double wx, wy, Omega, lambda;
};

ClosedFormInputs closed_form_inputs(const ModelParams& p) {
    p.validate();
    if (!p.isotropic()) throw NotIsotropic("closed-form spectra require g1 = g2");
    const PolaritonSpectrum s = polariton_frequencies(p);
    if (s.phase == Phase::Unstable)
        throw UnstablePhase("spectrum undefined for omega_y^2 < 0");
    if (s.phase == Phase::Critical)
        throw CriticalPhase("closed-form line weight singular at omega_y = 0");
    return {s.omega_x(), s.omega_y(),
            p.omega_c * p.omega_c + 4.0 * p.D * p.omega_c - p.omega_b * p.omega_b,
            2.0 * p.g1 * std::sqrt(p.omega_b * p.omega_c)};
}

SpectrumResult from_components(const FilterConfig& filter,
                               std::vector<LorentzianComponent> comps,
                               SpectrumMethod method) {
    SpectrumResult r;
    r.omega = filter.omega_grid;
    r.method = method;
    r.gamma = filter.gamma;
    r.components = std::move(comps);
    r.values.resize(r.omega.size(), 0.0);
    const double g2 = filter.gamma * filter.gamma;
    for (std::size_t i = 0; i < r.omega.size(); ++i)
        for (const auto& c : r.components) {
            const double d = r.omega[i] - c.center;
            r.values[i] += c.numerator / (g2 + d * d);
        }
    return r;
}

}  // namespace

void FilterConfig::validate() const {
    if (!(gamma > 0.0)) throw InvalidParams("filter gamma must be > 0");
    if (!(t_obs > 0.0)) throw InvalidParams("filter t_obs must be > 0");
    if (omega_grid.size() < 2) throw InvalidParams("omega grid needs >= 2 points");
    for (std::size_t i = 1; i < omega_grid.size(); ++i)
        if (!(omega_grid[i] > omega_grid[i - 1]))
            throw InvalidParams("omega grid must be strictly increasing");
}

FilterConfig make_filter(double gamma, double t_obs, double omega_max, int n_points) {
    FilterConfig f;
    f.gamma = gamma;
    f.t_obs = t_obs;
    f.omega_grid.resize(n_points);
    for (int i = 0; i < n_points; ++i)
        f.omega_grid[i] = omega_max * double(i) / double(n_points - 1);
    return f;
}

SpectrumResult ew_spectrum_quadrature(const ModelParams& p, FockProduct state,
                                      const FilterConfig& filter, bool stationary) {
    filter.validate();
    const FieldEvolution f(p);
    if (stationary && f.critical())
        throw CriticalPhase("stationary spectrum undefined at the transition "
                            "(secular dynamics)");
    const auto w = state_weights(state);
    const double G = filter.gamma, t = filter.t_obs;
    const double emt = std::exp(-G * t);

    SpectrumResult r;
    r.omega = filter.omega_grid;
    r.method = SpectrumMethod::Quadrature;
    r.gamma = G;
    r.t_obs = stationary ? 0.0 : t;
    r.stationary = stationary;
    r.critical_dynamics = f.critical();
    r.values.assign(r.omega.size(), 0.0);

    for (std::size_t i = 0; i < r.omega.size(); ++i) {
        const double om = r.omega[i];
        double S = 0.0;
        for (int j = 0; j < 4; ++j) {
            if (w[j] == 0.0) continue;
            if (stationary) {
                // time average: only coincident-frequency coherences survive
                auto terms = f.terms(j);
                double acc = 0.0;
                for (std::size_t a = 0; a < terms.size(); ++a) {
                    bool grouped = false;
                    for (std::size_t b = 0; b < a; ++b)
                        grouped = grouped || terms[b].freq == terms[a].freq;
                    if (grouped) continue;
                    Complex c = terms[a].c0;
                    for (std::size_t b = a + 1; b < terms.size(); ++b)
                        if (terms[b].freq == terms[a].freq) c += terms[b].c0;
                    const double den = G * G + (om + terms[a].freq) * (om + terms[a].freq);
                    acc += std::norm(c) / den;
                }
                S += w[j] * acc;
            } else {
                // e^{-Gamma t} int_0^t e^{(Gamma + i omega) tau} f_j(tau) dtau
                Complex I{0.0, 0.0};
                for (const ExpTerm& tm : f.terms(j)) {
                    const Complex z{G, om + tm.freq};
                    const Complex P = std::exp(kI * (om + tm.freq) * t);
                    I += tm.c0 * (P - emt) / z;
                    if (tm.c1 != 0.0)
                        I += tm.c1 * (P * (t / z - 1.0 / (z * z)) + emt / (z * z));
                }
                S += w[j] * std::norm(I);
            }
        }
        r.values[i] = 2.0 * G * S;
    }
    return r;
}

SpectrumResult ew_spectrum_trapezoid(const ModelParams& p, FockProduct state,
                                     const FilterConfig& filter, double rtol,
                                     int max_doublings) {
    filter.validate();
    const FieldEvolution f(p);
    const auto w = state_weights(state);
    const double G = filter.gamma, t = filter.t_obs;

    auto evaluate = [&](int n_steps, std::vector<double>& out) {
        const double h = t / n_steps;
        // tabulate e^{Gamma tau} f_j(tau) once per refinement level
        std::vector<std::array<Complex, 4>> ftab(n_steps + 1);
        for (int k = 0; k <= n_steps; ++k) {
            ftab[k] = f.coeffs(k * h);
            const double damp = std::exp(G * (k * h - t));  // e^{-Gamma(t - tau)}
            for (auto& c : ftab[k]) c *= damp;
        }
        out.assign(filter.omega_grid.size(), 0.0);
        for (std::size_t i = 0; i < filter.omega_grid.size(); ++i) {
            const double om = filter.omega_grid[i];
            std::array<Complex, 4> I{};
            for (int k = 0; k <= n_steps; ++k) {
                const Complex ph = std::exp(kI * om * (k * h));
                const double wt = (k == 0 || k == n_steps) ? 0.5 : 1.0;
                for (int j = 0; j < 4; ++j) I[j] += wt * ph * ftab[k][j];
            }
            double S = 0.0;
            for (int j = 0; j < 4; ++j) S += w[j] * std::norm(I[j] * h);
            out[i] = 2.0 * G * S;
        }
    };

    int n = 256;
    std::vector<double> prev, cur;
    evaluate(n, prev);
    for (int level = 0; level < max_doublings; ++level) {
        n *= 2;
        evaluate(n, cur);
        double dmax = 0.0, vmax = 0.0;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            dmax = std::max(dmax, std::abs(cur[i] - prev[i]));
            vmax = std::max(vmax, std::abs(cur[i]));
        }
        if (dmax <= rtol * vmax) {
            SpectrumResult r;
            r.omega = filter.omega_grid;
            r.values = std::move(cur);
            r.method = SpectrumMethod::Quadrature;
            r.gamma = G;
            r.t_obs = t;
            r.critical_dynamics = f.critical();
            return r;
        }
        prev.swap(cur);
    }
    throw QuadratureNotConverged("trapezoid spectrum did not reach rtol=" +
                                 std::to_string(rtol));
}

std::vector<double> ew_spectrum_2d_direct(const ModelParams& p, FockProduct state,
                                           const FilterConfig& filter,
                                           std::span<const double> omegas,
                                           int n_time, double imag_tol) {
    filter.validate();
    const FieldEvolution fe(p);
    const double G = filter.gamma, t = filter.t_obs;
    const double h = t / n_time;
    std::vector<std::array<Complex, 4>> ftab(n_time + 1);
    for (int k = 0; k <= n_time; ++k) ftab[k] = fe.coeffs(k * h);
    const auto wgt = state_weights(state);

    std::vector<double> out;
    out.reserve(omegas.size());
    double peak = 0.0;
    for (double om : omegas) {
        Complex S{0.0, 0.0};
        for (int k1 = 0; k1 <= n_time; ++k1) {
            const double w1 = (k1 == 0 || k1 == n_time) ? 0.5 : 1.0;
            const Complex e1 = std::exp((G - kI * om) * (k1 * h) - Complex(G * t, 0.0));
            for (int k2 = 0; k2 <= n_time; ++k2) {
                const double w2 = (k2 == 0 || k2 == n_time) ? 0.5 : 1.0;
                Complex corr{0.0, 0.0};
                for (int j = 0; j < 4; ++j)
                    corr += wgt[j] * std::conj(ftab[k1][j]) * ftab[k2][j];
                const Complex e2 = std::exp((G + kI * om) * (k2 * h) - Complex(G * t, 0.0));
                S += w1 * w2 * e1 * e2 * corr;
            }
        }
        S *= 2.0 * G * h * h;
        out.push_back(S.real());
        peak = std::max(peak, std::abs(S.real()));
        if (std::abs(S.imag()) > imag_tol * std::max(peak, 1e-300))
            throw QuadratureNotConverged("imaginary residue above tolerance");
    }
    return out;
}

SpectrumResult ew_spectrum_closed_10(const ModelParams& p, const FilterConfig& filter) {
    filter.validate();
    const auto in = closed_form_inputs(p);
    const double G = filter.gamma;
    const double root = std::sqrt(4.0 * in.lambda * in.lambda + in.Omega * in.Omega);
    const double wc = p.omega_c;
    std::vector<LorentzianComponent> comps;
    for (int branch = 0; branch < 2; ++branch) {
        const double w = branch == 0 ? in.wx : in.wy;
        const double sgn = branch == 0 ? 1.0 : -1.0;
        const double h = root == 0.0 ? 0.25 : std::pow(1.0 + sgn * in.Omega / root, 2) / 4.0;
        const double num4 = std::pow(wc + w, 4) + 2.0 * std::pow(wc * wc - w * w, 2);
        const double Gxy = G * h * num4 / (4.0 * wc * wc * w * w);
        comps.push_back({w, Gxy, Gxy / 2.0, Gxy / (2.0 * G * G)});
    }
    return from_components(filter, std::move(comps), SpectrumMethod::ClosedForm);
}

SpectrumResult ew_spectrum_closed_01(const ModelParams& p, const FilterConfig& filter) {
    filter.validate();
    const auto in = closed_form_inputs(p);
    const double G = filter.gamma;
    const double hxy = 4.0 * in.lambda * in.lambda /
                       (4.0 * in.lambda * in.lambda + in.Omega * in.Omega);
    const double wc = p.omega_c, wb = p.omega_b;
    std::vector<LorentzianComponent> comps;
    for (double w : {in.wx, in.wy}) {
        const double Gp = G * hxy * (3.0 * wb * wb - 2.0 * wb * w + 3.0 * w * w) *
                          (wc + w) * (wc + w) / (32.0 * wb * wc * w * w);
        comps.push_back({w, Gp, Gp, Gp / (G * G)});
    }
    return from_components(filter, std::move(comps), SpectrumMethod::ClosedForm);
}

SpectrumResult ew_spectrum_rwa(const ModelParams& p, const FilterConfig& filter) {
    filter.validate();
    p.validate();
    const auto [wx, wy] = rwa_frequencies(p);
    const double G = filter.gamma;
    const double g = p.g1;
    const double det = p.omega_b - p.omega_c;
    const double Grwa = 4.0 * G * g * g / (det * det + 4.0 * g * g);
    std::vector<LorentzianComponent> comps{
        {wx, Grwa, Grwa / 2.0, Grwa / (2.0 * G * G)},
        {wy, Grwa, Grwa / 2.0, Grwa / (2.0 * G * G)}};
    auto r = from_components(filter, std::move(comps), SpectrumMethod::RWA);
    return r;
}

SpectrumResult dsc_limit_spectrum(const ModelParams& p, const FilterConfig& filter) {
    filter.validate();
    p.validate();
    if (!p.isotropic()) throw NotIsotropic("DSC limit requires g1 = g2");
    const double G = filter.gamma, g = p.g1;
    const double wt = 2.0 * g * std::sqrt(p.omega_c / p.omega_b);
    const double num = 3.0 * G * g * g / (2.0 * p.omega_b * p.omega_c);
    std::vector<LorentzianComponent> comps{{wt, 2.0 * num, num, num / (G * G)}};
    return from_components(filter, std::move(comps), SpectrumMethod::DSCLimit);
}

VrsAnalysis vrs_analysis(const SpectrumResult& spec) {
    if (spec.omega.size() < 3) throw GridTooCoarse("need at least 3 grid points");
    double step = 0.0;
    for (std::size_t i = 1; i < spec.omega.size(); ++i)
        step = std::max(step, spec.omega[i] - spec.omega[i - 1]);
    if (step > spec.gamma / 5.0)
        throw GridTooCoarse("grid step " + std::to_string(step) +
                            " exceeds gamma/5 = " + std::to_string(spec.gamma / 5.0));

    VrsAnalysis a;
    const auto& v = spec.values;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (!(v[i] >= v[i - 1] && v[i] >= v[i + 1])) continue;
        if (v[i] == v[i + 1]) continue;  // flat plateau: attribute to left edge only
        const double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
        double pos = spec.omega[i], height = v[i];
        if (denom < 0.0) {
            const double d = 0.5 * (v[i - 1] - v[i + 1]) / denom;
            const double h = spec.omega[i + 1] - spec.omega[i];
            pos += d * h;
            height -= 0.25 * (v[i - 1] - v[i + 1]) * d;
        }
        a.peaks.push_back({pos, height});
    }
    std::sort(a.peaks.begin(), a.peaks.end(),
              [](const SpectrumPeak& l, const SpectrumPeak& r) {
                  return l.position < r.position;
              });
    if (a.peaks.size() < 2) {
        a.single_peak = true;
        return a;
    }
    // two dominant maxima
    auto dom = a.peaks;
    std::sort(dom.begin(), dom.end(), [](const SpectrumPeak& l, const SpectrumPeak& r) {
        return l.height > r.height;
    });
    const SpectrumPeak& p1 = dom[0];
    const SpectrumPeak& p2 = dom[1];
    const SpectrumPeak& left = p1.position < p2.position ? p1 : p2;
    const SpectrumPeak& right = p1.position < p2.position ? p2 : p1;
    a.splitting = right.position - left.position;
    a.asymmetry_ratio = right.height / left.height;
    return a;
}

double DRule::D_for(double g, double omega_b) const {
    switch (kind) {
        case Kind::TRK: return g * g / omega_b;
        case Kind::Scaled: return value * g * g / omega_b;
        case Kind::Zero: return 0.0;
        case Kind::RWA: return 0.0;
        case Kind::Explicit: return value;
    }
    return 0.0;
}

DispersionMap polariton_dispersion_map(double omega_c, double g,
                                       std::span<const double> omega_b_values,
                                       const DRule& rule, FockProduct state,
                                       const FilterConfig& filter) {
    filter.validate();
    DispersionMap map;
    map.omega_grid = filter.omega_grid;
    for (double wb : omega_b_values) {
        ModelParams p{omega_c, wb, g, rule.is_rwa() ? 0.0 : g, rule.D_for(g, wb)};
        DispersionPoint dp{wb, Phase::Normal, kNaN, kNaN};
        DispersionRow row{wb, Phase::Normal, {}};
        if (rule.is_rwa()) {
            const auto [wx, wy] = rwa_frequencies(p);
            dp.omega_x = wx;
            dp.omega_y = wy;
            row.values = ew_spectrum_rwa(p, filter).values;
        } else {
            const PolaritonSpectrum s = polariton_frequencies(p);
            dp.phase = row.phase = s.phase;
            dp.omega_x = s.omega_x();
            dp.omega_y = s.phase == Phase::Unstable ? kNaN : s.omega_y();
            if (s.phase == Phase::Normal) {
                if (state.n == 1 && state.m == 0)
                    row.values = ew_spectrum_closed_10(p, filter).values;
                else if (state.n == 0 && state.m == 1)
                    row.values = ew_spectrum_closed_01(p, filter).values;
                else
                    row.values =
                        ew_spectrum_quadrature(p, state, filter, true).values;
            } else {
                row.values.assign(filter.omega_grid.size(), kNaN);
            }
        }
        map.rows.push_back(std::move(row));
        map.dispersion.push_back(dp);
    }
    return map;
}

}  // namespace hopfield
