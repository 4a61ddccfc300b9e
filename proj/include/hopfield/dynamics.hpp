#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "hopfield/model.hpp"

namespace hopfield {

using Complex = std::complex<double>;

// Initial Fock product state |n, m> = |n>_field x |m>_matter.
struct FockProduct {
    int n = 0;  // field excitations
    int m = 0;  // matter excitations
};

// Closed-form coefficient table of the Heisenberg solution
//   a(t) = f1(t) a + f2(t) a^dag + f3(t) b + f4(t) b^dag,  g1 = g2 = g,
// with f_j(t) = mu_j1 e^{+i wx t} + mu_j2 e^{-i wx t}
//             + mu_j3 e^{+i wy t} + mu_j4 e^{-i wy t}.
//
// The mixing angle satisfies tan(2 phi) = 2 lambda / (Omega_x^2 - Omega_y^2)
// with lambda = 2 g sqrt(omega_c omega_b); this is the angle produced by the
// diagonalization chain (phi = theta + pi/4) and the only one for which the
// f_j solve the Heisenberg equations of motion (see tests).
struct MuMatrix {
    std::array<std::array<Complex, 4>, 4> mu;
    double phi;        // final rotation angle
    double lambda_ap;  // 2 g sqrt(omega_c omega_b)
    double omega_x;
    double omega_y;

    Complex row_sum(int j) const {
        return mu[j][0] + mu[j][1] + mu[j][2] + mu[j][3];
    }
};

// Throws NotIsotropic (g1 != g2), UnstablePhase, CriticalPhase (entries carry 1/omega_y).
MuMatrix mu_coefficients(const ModelParams& p);

// One term (c0 + c1 t) e^{i freq t} of an evolved-field coefficient. c1 is
// nonzero only in the critical phase, where the omega_y -> 0 limit of
// mu_j3 e^{+i wy t} + mu_j4 e^{-i wy t} is linear in t.
struct ExpTerm {
    double freq;
    Complex c0;
    Complex c1;
};

// Evaluates the four f_j(t); valid in the Normal phase and, through the
// continuous omega_y -> 0 limit, in the Critical phase (flagged).
class FieldEvolution {
  public:
    explicit FieldEvolution(const ModelParams& p);

    std::array<Complex, 4> coeffs(double t) const;
    bool critical() const { return critical_; }
    double omega_x() const { return omega_x_; }
    double omega_y() const { return omega_y_; }
    std::span<const ExpTerm> terms(int j) const { return terms_[j]; }

  private:
    std::array<std::vector<ExpTerm>, 4> terms_;
    bool critical_;
    double omega_x_;
    double omega_y_;
};

// <n,m| a^dag(t1) a(t2) |n,m>
//   = [f1*(t1) f1(t2) + f2*(t1) f2(t2)] n + [f3*(t1) f3(t2) + f4*(t1) f4(t2)] m
//   + f2*(t1) f2(t2) + f4*(t1) f4(t2).
Complex autocorrelation(const FieldEvolution& f, FockProduct state, double t1,
                        double t2);
Complex autocorrelation(const ModelParams& p, FockProduct state, double t1,
                        double t2);

// Checks C(t1,t2) = conj(C(t2,t1)) over all pairs of the sampled grid.
bool hermitian_check(const ModelParams& p, FockProduct state,
                     std::span<const double> t_grid, double tol = 1e-12);

}  // namespace hopfield
