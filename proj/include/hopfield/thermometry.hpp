#pragma once

#include <span>
#include <vector>

#include "hopfield/model.hpp"

namespace hopfield {

enum class ThermoBranch { Hyperbolic, Trigonometric, PoleNearby };

const char* to_string(ThermoBranch b);

// Equilibrium observables at one (parameters, T) point; k_B = 1, frequencies
// in units of omega_c.
struct ThermoPoint {
    double T;
    double Z;    // partition function
    double U;    // internal energy
    double C;    // heat capacity (units k_B)
    double qfi;  // quantum Fisher information, = C / T^2
    double snr;  // T sqrt(qfi)
    ThermoBranch branch_x = ThermoBranch::Hyperbolic;
    ThermoBranch branch_y = ThermoBranch::Hyperbolic;
};

// Z = Z_x Z_y with Z_mode = csch(omega / 2T) / 2.
double partition_function(const ModelParams& p, double T);
double partition_function_mode(double omega, double T);

// U = sum omega/2 coth(omega/2T); C = sum (omega/T)^2 csch^2(omega/2T) / 4;
// qfi = sum (omega/(2T^2))^2 csch^2(omega/(2T)) = C/T^2.
ThermoPoint thermo_point(const ModelParams& p, double T);

// Same formulas for explicitly given normal-mode frequencies (RWA-reduction
// checks, mode-resolved diagnostics).
ThermoPoint thermo_point_modes(double omega_x, double omega_y, double T);

// Detection window for the trigonometric continuation: |sin(arg)| below this
// reports a pole instead of an overflowing csc.
inline constexpr double kPoleSinTol = 1e-6;

struct CriticalQfi {
    double qfi;
    ThermoBranch branch_x;
    ThermoBranch branch_y;
};

// D = 0, g1 = g2 = g, resonance: omega_y^2 = omega_c^2 - 2 g omega_c. For
// g > g_crit the second csch acquires an imaginary argument and continues to
//   (2 g omega_c - omega_c^2)/(4 T^4) csc^2(sqrt(2 g omega_c - omega_c^2)/(2T)),
// with periodic poles at sqrt(.)/(2T) = n pi, reported via PoleAt.
CriticalQfi qfi_critical_d0(double omega_c, double g, double T);

struct SnrPoint {
    double g;
    double qfi;      // NaN at a pole
    double snr;      // T sqrt(qfi)
    double delta_t;  // Cramer-Rao bound 1/sqrt(N_meas qfi)
    ThermoBranch branch_x;
    ThermoBranch branch_y;
    bool pole = false;
    int pole_index = 0;
};

// Signal-to-noise curve T sqrt(F) over a coupling grid (D = 0, resonance),
// with pole locations annotated rather than clipped.
std::vector<SnrPoint> snr_curve(double omega_c, double T, std::span<const double> g_grid,
                                int n_measurements = 1);

// Finite-temperature critical coupling of the equilibrium Dicke transition:
// lambda_c = sqrt(omega_c omega_z coth(omega_z / 2T)) / 2.
double dicke_equilibrium_critical_coupling(double omega_c, double omega_z, double T);

// Analytic pole locus g/omega_c = 1/2 + 2 (T n pi)^2 of the continued QFI.
double qfi_pole_locus(double omega_c, double T, int n);

}  // namespace hopfield
