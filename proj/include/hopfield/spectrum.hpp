#pragma once

#include <span>
#include <vector>

#include "hopfield/dynamics.hpp"
#include "hopfield/model.hpp"

namespace hopfield {

// Fabry-Perot filter of the physical spectrum: central frequency sweeps the
// grid, half-width gamma, observation time t_obs.
struct FilterConfig {
    double gamma = 0.05;
    double t_obs = 200.0;
    std::vector<double> omega_grid;

    void validate() const;
};

FilterConfig make_filter(double gamma, double t_obs, double omega_max = 3.0,
                         int n_points = 3000);

enum class SpectrumMethod { Quadrature, ClosedForm, RWA, DSCLimit };

// One Lorentzian numerator / (gamma^2 + (omega - center)^2).
struct LorentzianComponent {
    double center;
    double weight;     // the line weight Gamma_{x,y} or Gamma'_{x,y}
    double numerator;  // what actually multiplies the Lorentzian
    double height;     // numerator / gamma^2
};

struct SpectrumResult {
    std::vector<double> omega;
    std::vector<double> values;
    std::vector<LorentzianComponent> components;  // closed forms only
    SpectrumMethod method;
    double gamma;
    double t_obs = 0.0;      // 0 for time-independent results
    bool stationary = false; // t -> infinity time average
    bool critical_dynamics = false;
};

// S(omega, t, Gamma) = 2 Gamma e^{-2 Gamma t}
//   int_0^t dt1 int_0^t dt2 e^{(Gamma - i omega) t1} e^{(Gamma + i omega) t2}
//   <a^dag(t1) a(t2)>,  evaluated at t = t_obs.
//
// The correlation kernel is a finite sum of products u*(t1) u(t2), so the
// double integral factors into |int_0^t e^{(Gamma + i omega) tau} f_j(tau)|^2
// with term-wise analytic antiderivatives; the result is exact and
// non-negative by construction. With `stationary` the t -> infinity time
// average is returned instead (fast cross terms dropped exactly).
SpectrumResult ew_spectrum_quadrature(const ModelParams& p, FockProduct state,
                                      const FilterConfig& filter,
                                      bool stationary = false);

// Secondary numerical route: composite-trapezoid evaluation of the same
// integrals, refined until the sup-norm relative change is below rtol.
SpectrumResult ew_spectrum_trapezoid(const ModelParams& p, FockProduct state,
                                     const FilterConfig& filter,
                                     double rtol = 1e-6, int max_doublings = 12);

// Direct 2-D trapezoid of the double integral at selected frequencies, with
// the imaginary residue checked against imag_tol * peak. Cross-check only.
std::vector<double> ew_spectrum_2d_direct(const ModelParams& p, FockProduct state,
                                           const FilterConfig& filter,
                                           std::span<const double> omegas,
                                           int n_time = 1200,
                                           double imag_tol = 1e-8);

// Long-time closed form for |1,0>:
//   S = sum_{x,y} (Gamma_{x,y}/2) / (Gamma^2 + (omega - omega_{x,y})^2),
//   Gamma_{x,y} = Gamma h_{x,y} [(omega_c + w)^4 + 2 (omega_c^2 - w^2)^2] / (4 omega_c^2 w^2),
//   h_{x,y} = [1 +- Omega (4 lambda^2 + Omega^2)^{-1/2}]^2 / 4.
SpectrumResult ew_spectrum_closed_10(const ModelParams& p, const FilterConfig& filter);

// Long-time closed form for |0,1>:
//   S' = sum_{x,y} Gamma'_{x,y} / (Gamma^2 + (omega - omega_{x,y})^2),
//   Gamma'_{x,y} = Gamma h_xy (3 wb^2 - 2 wb w + 3 w^2)(omega_c + w)^2 / (32 wb wc w^2),
//   h_xy = 4 lambda^2 / (4 lambda^2 + Omega^2).
SpectrumResult ew_spectrum_closed_01(const ModelParams& p, const FilterConfig& filter);

// RWA closed form (g2 = D = 0, initial state |1,0>): two Lorentzians with the
// common weight Gamma_RWA = 4 Gamma g^2 / ((omega_b - omega_c)^2 + 4 g^2).
SpectrumResult ew_spectrum_rwa(const ModelParams& p, const FilterConfig& filter);

// Deep-strong-coupling single Lorentzian (D = g^2/omega_b, g >> 1):
//   S~ = [3 Gamma g^2 / (2 omega_b omega_c)] / (Gamma^2 + (omega - w~)^2),
//   w~ = 2 g sqrt(omega_c / omega_b).
SpectrumResult dsc_limit_spectrum(const ModelParams& p, const FilterConfig& filter);

struct SpectrumPeak {
    double position;
    double height;
};

struct VrsAnalysis {
    std::vector<SpectrumPeak> peaks;  // all local maxima, ascending position
    double splitting = 0.0;           // distance between the two dominant peaks
    double asymmetry_ratio = 1.0;     // height(right dominant) / height(left dominant)
    bool single_peak = false;
};

// Requires grid step < gamma / 5 (GridTooCoarse otherwise). Peak positions and
// heights are refined by local quadratic interpolation.
VrsAnalysis vrs_analysis(const SpectrumResult& spec);

// Diamagnetic-term rule for sweeps.
struct DRule {
    enum class Kind { TRK, Scaled, Zero, RWA, Explicit };
    Kind kind = Kind::TRK;
    double value = 0.0;  // d for Scaled, D for Explicit

    double D_for(double g, double omega_b) const;
    bool is_rwa() const { return kind == Kind::RWA; }
};

struct DispersionRow {
    double omega_b;
    Phase phase;
    std::vector<double> values;  // S(omega) on the shared grid; NaN when undefined
};

struct DispersionPoint {
    double omega_b;
    Phase phase;
    double omega_x;  // Delta E_00^10
    double omega_y;  // Delta E_00^01; NaN in the unstable phase
};

struct DispersionMap {
    std::vector<double> omega_grid;
    std::vector<DispersionRow> rows;
    std::vector<DispersionPoint> dispersion;
};

// Spectrum rows S(omega) per omega_b value plus the polariton-dispersion
// overlay for the selected D rule.
DispersionMap polariton_dispersion_map(double omega_c, double g,
                                       std::span<const double> omega_b_values,
                                       const DRule& rule, FockProduct state,
                                       const FilterConfig& filter);

}  // namespace hopfield
