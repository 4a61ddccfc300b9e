#include "hopfield/model.hpp"

#include <cmath>
#include <string>

namespace hopfield {

namespace {

std::string fmt_params(const ModelParams& p) {
    return "(omega_c=" + std::to_string(p.omega_c) +
           ", omega_b=" + std::to_string(p.omega_b) + ", g1=" + std::to_string(p.g1) +
           ", g2=" + std::to_string(p.g2) + ", D=" + std::to_string(p.D) + ")";
}

}  // namespace

const char* to_string(Phase p) {
    switch (p) {
        case Phase::Normal: return "normal";
        case Phase::Critical: return "critical";
        case Phase::Unstable: return "unstable";
    }
    return "?";
}

void ModelParams::validate() const {
    if (!(omega_c > 0.0) || !std::isfinite(omega_c))
        throw InvalidParams("omega_c must be > 0, got " + std::to_string(omega_c));
    if (!(omega_b > 0.0) || !std::isfinite(omega_b))
        throw InvalidParams("omega_b must be > 0, got " + std::to_string(omega_b));
    if (g1 < 0.0 || g2 < 0.0 || D < 0.0 || !std::isfinite(g1) || !std::isfinite(g2) ||
        !std::isfinite(D))
        throw InvalidParams("couplings and D must be >= 0 in " + fmt_params(*this));
}

double ModelParams::lambda2() const {
    return (g1 - g2) / std::sqrt(omega_c * omega_b);
}

bool ModelParams::squeezing_valid() const { return std::abs(lambda2()) < 1.0; }

DerivedQuantities derived_quantities(const ModelParams& p) {
    p.validate();
    if (!p.squeezing_valid())
        throw InvalidSqueezing("|lambda2| >= 1 in " + fmt_params(p));
    DerivedQuantities d;
    d.Omega_x_sq = p.omega_c * p.omega_c + 4.0 * p.D * p.omega_c;
    d.Omega_y_sq = p.omega_b * p.omega_b;
    const double root = std::sqrt(p.omega_c * p.omega_b);
    d.lambda1 = (p.g1 + p.g2) * root;
    d.lambda2 = (p.g1 - p.g2) / root;
    const double sum = d.Omega_x_sq + d.Omega_y_sq;
    d.w1_sq = (1.0 + d.lambda2) * (sum + 2.0 * d.lambda1) / 2.0;
    d.w2_sq = (1.0 - d.lambda2) * (sum - 2.0 * d.lambda1) / 2.0;
    d.lambda_tilde = (d.Omega_x_sq - d.Omega_y_sq) / 2.0;
    d.lambda_coupling =
        std::sqrt(1.0 - d.lambda2 * d.lambda2) * (d.Omega_y_sq - d.Omega_x_sq) / 2.0;
    d.theta = (d.w1_sq == d.w2_sq)
                  ? M_PI / 4.0
                  : 0.5 * std::atan2(2.0 * d.lambda_coupling, d.w1_sq - d.w2_sq);
    d.r1 = std::log(std::sqrt(1.0 + d.lambda2));
    d.r2 = std::log(std::sqrt(1.0 - d.lambda2));
    return d;
}

double PolaritonSpectrum::omega_x() const { return std::sqrt(omega_x_sq); }

double PolaritonSpectrum::omega_y() const {
    if (phase == Phase::Unstable)
        throw UnstablePhase("omega_y undefined: omega_y^2 = " +
                            std::to_string(omega_y_sq) + " < 0");
    return phase == Phase::Critical ? 0.0 : std::sqrt(omega_y_sq);
}

PolaritonSpectrum polariton_frequencies(const ModelParams& p) {
    p.validate();
    if (!p.squeezing_valid())
        throw InvalidSqueezing("|lambda2| >= 1 in " + fmt_params(p));
    const double Sx = p.omega_c * p.omega_c + 4.0 * p.D * p.omega_c;
    const double Sy = p.omega_b * p.omega_b;
    const double root = std::sqrt(p.omega_c * p.omega_b);
    const double l1 = (p.g1 + p.g2) * root;
    const double l2 = (p.g1 - p.g2) / root;
    const double a = 2.0 * l1 * l2 + Sx + Sy;
    const double r = std::sqrt((1.0 - l2 * l2) * (Sx - Sy) * (Sx - Sy) +
                               (2.0 * l1 + l2 * (Sx + Sy)) * (2.0 * l1 + l2 * (Sx + Sy)));
    PolaritonSpectrum s;
    s.omega_x_sq = (a + r) / 2.0;
    // (a - r)/2 cancels near the transition; the product form does not.
    s.omega_y_sq = (1.0 - l2 * l2) * (Sx * Sy - l1 * l1) / s.omega_x_sq;
    const double tol = kPhaseTol * p.omega_c * p.omega_c;
    s.phase = std::abs(s.omega_y_sq) < tol
                  ? Phase::Critical
                  : (s.omega_y_sq < 0.0 ? Phase::Unstable : Phase::Normal);
    return s;
}

std::pair<double, double> rwa_frequencies(const ModelParams& p) {
    p.validate();
    const double d = p.omega_c - p.omega_b;
    const double r = std::sqrt(d * d + 4.0 * p.g1 * p.g1);
    return {(p.omega_c + p.omega_b + r) / 2.0, (p.omega_c + p.omega_b - r) / 2.0};
}

double energy_level(const ModelParams& p, int m, int n, bool shifted) {
    if (m < 0 || n < 0) throw InvalidParams("quantum numbers must be >= 0");
    const PolaritonSpectrum s = polariton_frequencies(p);
    if (s.phase == Phase::Unstable)
        throw UnstablePhase("energy levels undefined for omega_y^2 < 0 in " +
                            fmt_params(p));
    const double wx = s.omega_x();
    const double wy = s.omega_y();
    return shifted ? wx * m + wy * n : wx * (m + 0.5) + wy * (n + 0.5);
}

double critical_diamagnetic(const ModelParams& p) {
    p.validate();
    const double sum = p.g1 + p.g2;
    return sum * sum / (4.0 * p.omega_b) - p.omega_c / 4.0;
}

double critical_coupling(const ModelParams& p) {
    p.validate();
    if (p.D != 0.0) throw InvalidParams("critical_coupling requires D = 0");
    if (!p.isotropic()) throw NotIsotropic("critical_coupling requires g1 = g2");
    return std::sqrt(p.omega_c * p.omega_b) / 2.0;
}

}  // namespace hopfield
