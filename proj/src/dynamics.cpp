#include "hopfield/dynamics.hpp"

#include <cmath>

namespace hopfield {

namespace {

constexpr Complex kI{0.0, 1.0};

struct Angles {
    double cos2;   // cos^2(phi)
    double sin2;   // sin^2(phi)
    double sin2p;  // sin(2 phi)
    double phi;
};

Angles mixing_angle(const ModelParams& p) {
    const double lambda = 2.0 * p.g1 * std::sqrt(p.omega_c * p.omega_b);
    const double Omega = p.omega_c * p.omega_c + 4.0 * p.D * p.omega_c -
                         p.omega_b * p.omega_b;
    const double two_phi = std::atan2(2.0 * lambda, Omega);
    Angles a;
    a.phi = 0.5 * two_phi;
    const double c = std::cos(a.phi), s = std::sin(a.phi);
    a.cos2 = c * c;
    a.sin2 = s * s;
    a.sin2p = std::sin(two_phi);
    return a;
}

PolaritonSpectrum require_isotropic_stable(const ModelParams& p) {
    p.validate();
    if (!p.isotropic())
        throw NotIsotropic("closed-form dynamics requires g1 = g2");
    const PolaritonSpectrum s = polariton_frequencies(p);
    if (s.phase == Phase::Unstable)
        throw UnstablePhase("dynamics undefined for omega_y^2 < 0");
    return s;
}

}  // namespace

MuMatrix mu_coefficients(const ModelParams& p) {
    const PolaritonSpectrum s = require_isotropic_stable(p);
    if (s.phase == Phase::Critical)
        throw CriticalPhase("mu coefficients singular at omega_y = 0; "
                            "use FieldEvolution for the continuous limit");
    const double wc = p.omega_c, wb = p.omega_b;
    const double wx = s.omega_x(), wy = s.omega_y();
    const Angles a = mixing_angle(p);
    const double sq = std::sqrt(wb * wc);

    MuMatrix m;
    m.phi = a.phi;
    m.lambda_ap = 2.0 * p.g1 * sq;
    m.omega_x = wx;
    m.omega_y = wy;
    auto& mu = m.mu;
    mu[0][0] = -a.cos2 * (wc - wx) * (wc - wx) / (4 * wc * wx);
    mu[0][1] = a.cos2 * (wc + wx) * (wc + wx) / (4 * wc * wx);
    mu[0][2] = -a.sin2 * (wc - wy) * (wc - wy) / (4 * wc * wy);
    mu[0][3] = a.sin2 * (wc + wy) * (wc + wy) / (4 * wc * wy);

    mu[1][0] = a.cos2 * (wc - wx) * (wc + wx) / (4 * wc * wx);
    mu[1][1] = a.cos2 * (wx * wx - wc * wc) / (4 * wc * wx);
    mu[1][2] = a.sin2 * (wc - wy) * (wc + wy) / (4 * wc * wy);
    mu[1][3] = a.sin2 * (wy * wy - wc * wc) / (4 * wc * wy);

    mu[2][0] = kI * a.sin2p * (wb - wx) * (wc - wx) / (8 * wx * sq);
    mu[2][1] = -kI * a.sin2p * (wb + wx) * (wc + wx) / (8 * wx * sq);
    mu[2][2] = kI * a.sin2p * (wb - wy) * (wy - wc) / (8 * wy * sq);
    mu[2][3] = kI * a.sin2p * (wb + wy) * (wc + wy) / (8 * wy * sq);

    mu[3][0] = kI * a.sin2p * (wb + wx) * (wc - wx) / (8 * wx * sq);
    mu[3][1] = -kI * a.sin2p * (wb - wx) * (wc + wx) / (8 * wx * sq);
    mu[3][2] = -kI * a.sin2p * (wb + wy) * (wc - wy) / (8 * wy * sq);
    mu[3][3] = kI * a.sin2p * (wb - wy) * (wc + wy) / (8 * wy * sq);
    return m;
}

FieldEvolution::FieldEvolution(const ModelParams& p) {
    const PolaritonSpectrum s = require_isotropic_stable(p);
    critical_ = (s.phase == Phase::Critical);
    omega_x_ = s.omega_x();
    omega_y_ = s.omega_y();

    if (!critical_) {
        const MuMatrix m = mu_coefficients(p);
        const double nu[4] = {omega_x_, -omega_x_, omega_y_, -omega_y_};
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                terms_[j].push_back({nu[k], m.mu[j][k], 0.0});
        return;
    }

    // omega_y = 0: mu_j3, mu_j4 diverge but the combinations
    // mu_j3 e^{+i wy t} + mu_j4 e^{-i wy t} have finite (c0 + c1 t) limits.
    const double wc = p.omega_c, wb = p.omega_b, wx = omega_x_;
    const Angles a = mixing_angle(p);
    const double sq = std::sqrt(wb * wc);

    const Complex x1[4] = {-a.cos2 * (wc - wx) * (wc - wx) / (4 * wc * wx),
                           a.cos2 * (wc - wx) * (wc + wx) / (4 * wc * wx),
                           kI * a.sin2p * (wb - wx) * (wc - wx) / (8 * wx * sq),
                           kI * a.sin2p * (wb + wx) * (wc - wx) / (8 * wx * sq)};
    const Complex x2[4] = {a.cos2 * (wc + wx) * (wc + wx) / (4 * wc * wx),
                           a.cos2 * (wx * wx - wc * wc) / (4 * wc * wx),
                           -kI * a.sin2p * (wb + wx) * (wc + wx) / (8 * wx * sq),
                           -kI * a.sin2p * (wb - wx) * (wc + wx) / (8 * wx * sq)};
    const Complex y0[4] = {a.sin2, 0.0, kI * a.sin2p * (wb + wc) / (4 * sq),
                           kI * a.sin2p * (wb - wc) / (4 * sq)};
    const Complex y1[4] = {-kI * a.sin2 * wc / 2.0, kI * a.sin2 * wc / 2.0,
                           a.sin2p * wb * wc / (4 * sq), a.sin2p * wb * wc / (4 * sq)};
    for (int j = 0; j < 4; ++j) {
        terms_[j].push_back({omega_x_, x1[j], 0.0});
        terms_[j].push_back({-omega_x_, x2[j], 0.0});
        terms_[j].push_back({0.0, y0[j], y1[j]});
    }
}

std::array<Complex, 4> FieldEvolution::coeffs(double t) const {
    std::array<Complex, 4> f{};
    for (int j = 0; j < 4; ++j)
        for (const ExpTerm& tm : terms_[j])
            f[j] += (tm.c0 + tm.c1 * t) * std::exp(kI * tm.freq * t);
    return f;
}

Complex autocorrelation(const FieldEvolution& f, FockProduct state, double t1,
                        double t2) {
    if (state.n < 0 || state.m < 0)
        throw InvalidParams("Fock occupations must be >= 0");
    const auto a = f.coeffs(t1);
    const auto b = f.coeffs(t2);
    const double n = state.n, m = state.m;
    return (std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1]) * n +
           (std::conj(a[2]) * b[2] + std::conj(a[3]) * b[3]) * m +
           std::conj(a[1]) * b[1] + std::conj(a[3]) * b[3];
}

Complex autocorrelation(const ModelParams& p, FockProduct state, double t1,
                        double t2) {
    return autocorrelation(FieldEvolution(p), state, t1, t2);
}

bool hermitian_check(const ModelParams& p, FockProduct state,
                     std::span<const double> t_grid, double tol) {
    const FieldEvolution f(p);
    for (double t1 : t_grid)
        for (double t2 : t_grid) {
            const Complex c12 = autocorrelation(f, state, t1, t2);
            const Complex c21 = autocorrelation(f, state, t2, t1);
            if (std::abs(c12 - std::conj(c21)) > tol) return false;
        }
    return true;
}

}  // namespace hopfield
