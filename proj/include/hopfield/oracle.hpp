#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <span>
#include <vector>

#include "hopfield/dynamics.hpp"
#include "hopfield/model.hpp"

namespace hopfield {
namespace oracle {

// Truncated two-mode Fock space: occupations 0..cutoff per mode, dimension
// (cutoff+1)^2.
enum class Representation {
    Original,  // as-written form, complex Hermitian
    Rotated    // T-rotated form with real couplings, real symmetric
};

struct FockTruncation {
    int cutoff;
    Representation rep = Representation::Rotated;
};

// Memory guard for dense constructions.
inline constexpr std::size_t kDenseBudgetBytes = std::size_t(3200) << 20;

// H1 = wc a^t a + wb b^t b + g1(a b^t + a^t b) + g2(a^t b^t + a b) + D(a+a^t)^2,
// real symmetric, unitarily equivalent to the original Hamiltonian.
Eigen::MatrixXd build_rotated_dense(const ModelParams& p, int cutoff);
// Original form with i g1 (a b^t - a^t b) + i g2 (a^t b^t - a b).
Eigen::MatrixXcd build_original_dense(const ModelParams& p, int cutoff);

// Lexicographic indices (m*(cutoff+1)+n) of the even / odd total-occupation
// parity sectors; the Hamiltonian is block diagonal in them.
std::pair<std::vector<int>, std::vector<int>> parity_indices(int cutoff);

// Parity-sector basis ordered matter-occupation-major; this ordering makes the
// sector matrix banded with half-bandwidth ~ (cutoff+1)/2 and block
// tridiagonal across matter rows.
class SectorBasis {
  public:
    SectorBasis(int cutoff, int parity);

    int size() const { return size_; }
    int cutoff() const { return cutoff_; }
    int parity() const { return parity_; }
    int rows() const { return cutoff_ + 1; }
    int row_count(int n) const { return counts_[n]; }
    int row_offset(int n) const { return offsets_[n]; }
    int first_m(int n) const { return (n + parity_) % 2; }
    // index of |m, n> within the sector; m must have the right parity
    int index_of(int m, int n) const { return offsets_[n] + (m - first_m(n)) / 2; }
    std::pair<int, int> state_of(int idx) const;

  private:
    int cutoff_, parity_, size_;
    std::vector<int> counts_, offsets_;
};

// LAPACK lower band storage (column major), ab[(i-j) + j*(kd+1)] for i >= j.
struct BandedSector {
    SectorBasis basis;
    int kd;
    std::vector<double> ab;
};

BandedSector build_sector_banded(const ModelParams& p, int cutoff, int parity);

// All eigenvalues of one parity sector (two-stage banded reduction).
std::vector<double> sector_eigenvalues(const ModelParams& p, int cutoff, int parity);
// Both sectors merged and sorted.
std::vector<double> truncated_eigenvalues(const ModelParams& p, int cutoff);

// Number of sector eigenvalues below sigma, by block-tridiagonal LDL^t
// congruence (Sylvester inertia).
int sector_eigenvalue_count_below(const ModelParams& p, int cutoff, int parity,
                                  double sigma);

// k-th (0-based) smallest sector eigenvalue by inertia bisection.
double sector_eigenvalue(const ModelParams& p, int cutoff, int parity, int k,
                         double tol = 1e-10);

struct OracleGaps {
    double ground;   // E0 (even sector)
    double omega_y;  // first odd eigenvalue - E0
    double omega_x;  // second odd eigenvalue - E0; equals the upper polariton
                     // frequency when omega_x < 3 omega_y
};

// Lowest excitation gaps from inertia-sliced sector eigenvalues.
OracleGaps lowest_gaps(const ModelParams& p, int cutoff, double tol = 1e-10);

// Ascending eigenvalues of a dense Hermitian matrix.
std::vector<double> eigenspectrum(const Eigen::MatrixXd& h);
std::vector<double> eigenspectrum(const Eigen::MatrixXcd& h);

// |E_k(N) - E_k(N')| per eigenvalue of the coarser list; entries exceeding
// rtol*scale are truncation artifacts, not physical levels.
std::vector<double> convergence_estimates(std::span<const double> fine,
                                          std::span<const double> coarse);

// Population found within `margin` of the cutoff during propagation; above
// warn_level the truncation is leaking.
struct LeakReport {
    double max_population = 0.0;
    bool warning = false;
};

// Spectral-decomposition Heisenberg propagation in the rotated representation
// (diagonalized once, reused across t).
class HeisenbergPropagator {
  public:
    HeisenbergPropagator(const ModelParams& p, int cutoff);

    // f_j(t) of a(t) = f1 a + f2 a^t + f3 b + f4 b^t in the original frame.
    std::array<std::vector<Complex>, 4> field_coeffs(std::span<const double> t_grid);

    // <n,m| a^dag(t1) a(t2) |n,m>
    Complex autocorrelation(FockProduct state, double t1, double t2);

    // Full matrix of a(t) (or b(t)) in the original frame; small cutoffs only.
    enum class Op { a, b };
    Eigen::MatrixXcd evolved_operator(Op op, double t) const;

    const LeakReport& leak() const { return leak_; }
    int cutoff() const { return cutoff_; }

  private:
    Eigen::VectorXcd evolve(int parity, const Eigen::VectorXcd& v, double dt);
    void record_leak(const Eigen::VectorXcd& v, int parity);

    int cutoff_;
    SectorBasis even_, odd_;
    Eigen::MatrixXd v_even_, v_odd_;  // eigenvectors
    Eigen::VectorXd e_even_, e_odd_;  // eigenvalues
    LeakReport leak_;
};

struct LadderThermo {
    double Z;
    double U;
    double C;
    int m_terms;
    int n_terms;
};

// Direct sums over E_mn = wx(m+1/2) + wy(n+1/2), truncated where the
// remaining tail is below tail_rel * Z.
LadderThermo ladder_thermo(const ModelParams& p, double T, double tail_rel = 1e-14,
                           int max_terms = 2000000);

}  // namespace oracle
}  // namespace hopfield
