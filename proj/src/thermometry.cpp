#include "hopfield/thermometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hopfield {

namespace {

PolaritonSpectrum require_normal(const ModelParams& p, double T) {
    p.validate();
    if (!(T > 0.0)) throw InvalidParams("temperature must be > 0");
    const PolaritonSpectrum s = polariton_frequencies(p);
    if (s.phase == Phase::Unstable)
        throw UnstablePhase("thermal state undefined for omega_y^2 < 0");
    if (s.phase == Phase::Critical)
        throw CriticalPhase("partition function diverges at omega_y = 0");
    return s;
}

double csch(double x) { return 1.0 / std::sinh(x); }

// x^2 csch^2(x), smooth through x -> 0
double x2csch2(double x) {
    if (std::abs(x) < 1e-6) return 1.0 - x * x / 3.0;
    const double c = csch(x);
    return x * x * c * c;
}

// (omega / (2 T^2))^2 csch^2(omega / (2T)), smooth through omega -> 0
double qfi_mode(double omega, double T) {
    const double x = omega / (2.0 * T);
    if (std::abs(x) < 1e-6) return (1.0 - x * x / 3.0) / (T * T);
    const double u = omega / (2.0 * T * T);
    const double c = csch(x);
    return u * u * c * c;
}

}  // namespace

const char* to_string(ThermoBranch b) {
    switch (b) {
        case ThermoBranch::Hyperbolic: return "hyperbolic";
        case ThermoBranch::Trigonometric: return "trigonometric";
        case ThermoBranch::PoleNearby: return "pole";
    }
    return "?";
}

double partition_function_mode(double omega, double T) {
    return 0.5 * csch(omega / (2.0 * T));
}

double partition_function(const ModelParams& p, double T) {
    const PolaritonSpectrum s = require_normal(p, T);
    return partition_function_mode(s.omega_x(), T) *
           partition_function_mode(s.omega_y(), T);
}

ThermoPoint thermo_point_modes(double omega_x, double omega_y, double T) {
    if (!(T > 0.0)) throw InvalidParams("temperature must be > 0");
    if (!(omega_x > 0.0) || !(omega_y > 0.0))
        throw InvalidParams("mode frequencies must be > 0");
    ThermoPoint r;
    r.T = T;
    r.Z = partition_function_mode(omega_x, T) * partition_function_mode(omega_y, T);
    r.U = 0.0;
    r.C = 0.0;
    for (double w : {omega_x, omega_y}) {
        const double x = w / (2.0 * T);
        r.U += 0.5 * w / std::tanh(x);
        r.C += x2csch2(x);  // (omega/T)^2 csch^2(omega/2T) / 4
    }
    r.qfi = qfi_mode(omega_x, T) + qfi_mode(omega_y, T);
    r.snr = T * std::sqrt(r.qfi);
    return r;
}

ThermoPoint thermo_point(const ModelParams& p, double T) {
    const PolaritonSpectrum s = require_normal(p, T);
    return thermo_point_modes(s.omega_x(), s.omega_y(), T);
}

CriticalQfi qfi_critical_d0(double omega_c, double g, double T) {
    if (!(omega_c > 0.0) || g < 0.0) throw InvalidParams("need omega_c > 0, g >= 0");
    if (!(T > 0.0)) throw InvalidParams("temperature must be > 0");
    CriticalQfi r{0.0, ThermoBranch::Hyperbolic, ThermoBranch::Hyperbolic};
    const double wx2 = omega_c * omega_c + 2.0 * g * omega_c;
    r.qfi = qfi_mode(std::sqrt(wx2), T);

    const double wy2 = omega_c * omega_c - 2.0 * g * omega_c;
    if (wy2 >= 0.0) {
        r.qfi += qfi_mode(std::sqrt(wy2), T);
        return r;
    }
    // omega_y purely imaginary: csch -> -i csc, csch^2 -> -csc^2, the signed
    // prefactor wy2/(4T^4) keeps the term real and positive between poles.
    r.branch_y = ThermoBranch::Trigonometric;
    const double kappa = std::sqrt(-wy2);
    const double arg = kappa / (2.0 * T);
    if (arg < 1e-6) {
        // x^2 csc^2(x) = 1 + x^2/3 + ...; continuous with the hyperbolic side
        r.qfi += (1.0 + arg * arg / 3.0) / (T * T);
        return r;
    }
    const double s = std::sin(arg);
    if (std::abs(s) < kPoleSinTol) {
        const int n = int(std::lround(arg / M_PI));
        throw PoleAt("QFI continuation pole: sqrt(2 g omega_c - omega_c^2)/(2T) "
                     "within tolerance of " + std::to_string(n) + " pi",
                     g, n);
    }
    r.qfi += (-wy2) / (4.0 * T * T * T * T) / (s * s);
    return r;
}

std::vector<SnrPoint> snr_curve(double omega_c, double T, std::span<const double> g_grid,
                                int n_measurements) {
    if (n_measurements < 1) throw InvalidParams("n_measurements must be >= 1");
    std::vector<SnrPoint> out;
    out.reserve(g_grid.size());
    for (double g : g_grid) {
        SnrPoint pt{};
        pt.g = g;
        try {
            const CriticalQfi q = qfi_critical_d0(omega_c, g, T);
            pt.qfi = q.qfi;
            pt.snr = T * std::sqrt(q.qfi);
            pt.delta_t = 1.0 / std::sqrt(double(n_measurements) * q.qfi);
            pt.branch_x = q.branch_x;
            pt.branch_y = q.branch_y;
        } catch (const PoleAt& e) {
            pt.qfi = std::nan("");
            pt.snr = std::nan("");
            pt.delta_t = 0.0;
            pt.branch_x = ThermoBranch::Hyperbolic;
            pt.branch_y = ThermoBranch::PoleNearby;
            pt.pole = true;
            pt.pole_index = e.n;
        }
        out.push_back(pt);
    }
    // annotate the grid point nearest each analytic pole locus in range
    if (!out.empty()) {
        const double g_max = *std::max_element(g_grid.begin(), g_grid.end());
        for (int n = 1;; ++n) {
            const double gp = qfi_pole_locus(omega_c, T, n);
            if (gp > g_max) break;
            std::size_t best = 0;
            for (std::size_t i = 1; i < out.size(); ++i)
                if (std::abs(out[i].g - gp) < std::abs(out[best].g - gp)) best = i;
            out[best].pole = true;
            out[best].pole_index = n;
            out[best].branch_y = ThermoBranch::PoleNearby;
        }
    }
    return out;
}

double dicke_equilibrium_critical_coupling(double omega_c, double omega_z, double T) {
    if (!(omega_c > 0.0) || !(omega_z > 0.0) || !(T > 0.0))
        throw InvalidParams("dicke critical coupling needs positive inputs");
    return 0.5 * std::sqrt(omega_c * omega_z / std::tanh(omega_z / (2.0 * T)));
}

double qfi_pole_locus(double omega_c, double T, int n) {
    if (n < 1) throw InvalidParams("pole index must be >= 1");
    return omega_c * (0.5 + 2.0 * (T * n * M_PI) * (T * n * M_PI) / (omega_c * omega_c));
}

}  // namespace hopfield
