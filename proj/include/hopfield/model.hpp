#pragma once

#include <utility>

#include "hopfield/errors.hpp"

namespace hopfield {

inline constexpr const char* kVersion = "0.1.0";

// Parameters of H = omega_c a^dag a + omega_b b^dag b
//                 + i g1 (a b^dag - a^dag b) + i g2 (a^dag b^dag - a b)
//                 + D (a + a^dag)^2,   hbar = k_B = 1.
struct ModelParams {
    double omega_c = 1.0;  // field mode frequency, > 0
    double omega_b = 1.0;  // matter mode frequency, > 0
    double g1 = 0.0;       // corotating coupling, >= 0
    double g2 = 0.0;       // counterrotating coupling, >= 0
    double D = 0.0;        // diamagnetic strength, >= 0

    void validate() const;
    bool isotropic() const { return g1 == g2; }

    // lambda_2 = (g1 - g2) / sqrt(omega_c omega_b); the squeezing step of the
    // diagonalization requires |lambda_2| < 1.
    double lambda2() const;
    bool squeezing_valid() const;

    static ModelParams isotropic_coupling(double omega_c, double omega_b,
                                          double g, double D) {
        return ModelParams{omega_c, omega_b, g, g, D};
    }
    // Resonant parameters with the TRK-rule diamagnetic term D = g^2/omega_b.
    static ModelParams resonant_trk(double g, double omega = 1.0) {
        return ModelParams{omega, omega, g, g, g * g / omega};
    }
};

// Intermediate quantities of the diagonalization chain T, R, S, R_theta.
struct DerivedQuantities {
    double Omega_x_sq;        // omega_c^2 + 4 D omega_c
    double Omega_y_sq;        // omega_b^2
    double lambda1;           // (g1 + g2) sqrt(omega_c omega_b)
    double lambda2;           // (g1 - g2) / sqrt(omega_c omega_b)
    double w1_sq;             // (1 + lambda2)(Omega_x^2 + Omega_y^2 + 2 lambda1)/2
    double w2_sq;             // (1 - lambda2)(Omega_x^2 + Omega_y^2 - 2 lambda1)/2
    double lambda_tilde;      // (Omega_x^2 - Omega_y^2)/2
    double lambda_coupling;   // sqrt(1 - lambda2^2)(Omega_y^2 - Omega_x^2)/2
    double theta;             // tan(2 theta) = 2 lambda_coupling / (w1^2 - w2^2)
    double r1;                // ln sqrt(1 + lambda2)
    double r2;                // ln sqrt(1 - lambda2)
};

enum class Phase { Normal, Critical, Unstable };

const char* to_string(Phase p);

// |omega_y^2| below this (in units of omega_c^2) classifies as Critical.
inline constexpr double kPhaseTol = 1e-10;

struct PolaritonSpectrum {
    double omega_x_sq;  // upper branch squared, >= omega_y_sq
    double omega_y_sq;  // lower branch squared; negative in the unstable phase
    Phase phase;

    double omega_x() const;
    // Throws UnstablePhase when omega_y_sq < 0; returns 0 in the critical phase.
    double omega_y() const;
};

DerivedQuantities derived_quantities(const ModelParams& p);

// Exact polariton frequencies of the anisotropic Hamiltonian:
//   2 w_{x,y}^2 = (2 l1 l2 + Ox^2 + Oy^2)
//                 +- sqrt((1 - l2^2)(Ox^2 - Oy^2)^2 + (2 l1 + l2 (Ox^2 + Oy^2))^2).
// The lower branch is evaluated through the stable product form
//   wx^2 wy^2 = (1 - l2^2)(Ox^2 Oy^2 - l1^2).
PolaritonSpectrum polariton_frequencies(const ModelParams& p);

// Rotating-wave frequencies 2 w_{x,y} = (omega_c + omega_b)
//                                       +- sqrt((omega_c - omega_b)^2 + 4 g1^2).
// g2 and D are ignored.
std::pair<double, double> rwa_frequencies(const ModelParams& p);

// E_mn = omega_x (m + 1/2) + omega_y (n + 1/2); with `shifted` the ground state
// is placed at zero: E_mn = omega_x m + omega_y n.
double energy_level(const ModelParams& p, int m, int n, bool shifted = false);

// D_crit = (g1 + g2)^2 / (4 omega_b) - omega_c / 4. The Hamiltonian is bounded
// from below iff D > D_crit.
double critical_diamagnetic(const ModelParams& p);

// g_crit = sqrt(omega_c omega_b) / 2 for D = 0, g1 = g2.
double critical_coupling(const ModelParams& p);

}  // namespace hopfield
