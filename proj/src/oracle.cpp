#include "hopfield/oracle.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hopfield {
namespace oracle {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_dense_budget(std::size_t dim, std::size_t elem_bytes, int factor = 3) {
    // factor: matrix + eigenvectors/workspace
    if (dim * dim * elem_bytes * factor > kDenseBudgetBytes)
        throw CutoffTooLarge("dense construction of dimension " + std::to_string(dim) +
                             " exceeds the memory budget");
}

void lapack_check(int info, const char* what) {
    if (info != 0)
        throw Error(std::string(what) + " failed, info=" + std::to_string(info));
}

}  // namespace

Eigen::MatrixXd build_rotated_dense(const ModelParams& p, int cutoff) {
    p.validate();
    if (cutoff < 2) throw InvalidParams("cutoff must be >= 2");
    const int d = cutoff + 1;
    check_dense_budget(std::size_t(d) * d, sizeof(double));
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d * d, d * d);
    auto idx = [d](int m, int n) { return m * d + n; };
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            const int i = idx(m, n);
            h(i, i) = p.omega_c * m + p.omega_b * n + p.D * (2 * m + 1);
            if (m + 1 < d && n - 1 >= 0)
                h(idx(m + 1, n - 1), i) += p.g1 * std::sqrt(double(m + 1) * n);
            if (m - 1 >= 0 && n + 1 < d)
                h(idx(m - 1, n + 1), i) += p.g1 * std::sqrt(double(m) * (n + 1));
            if (m + 1 < d && n + 1 < d)
                h(idx(m + 1, n + 1), i) += p.g2 * std::sqrt(double(m + 1) * (n + 1));
            if (m - 1 >= 0 && n - 1 >= 0)
                h(idx(m - 1, n - 1), i) += p.g2 * std::sqrt(double(m) * n);
            if (m + 2 < d)
                h(idx(m + 2, n), i) += p.D * std::sqrt(double(m + 1) * (m + 2));
            if (m - 2 >= 0)
                h(idx(m - 2, n), i) += p.D * std::sqrt(double(m) * (m - 1));
        }
    return h;
}

Eigen::MatrixXcd build_original_dense(const ModelParams& p, int cutoff) {
    p.validate();
    if (cutoff < 2) throw InvalidParams("cutoff must be >= 2");
    const int d = cutoff + 1;
    check_dense_budget(std::size_t(d) * d, sizeof(Complex));
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d * d, d * d);
    auto idx = [d](int m, int n) { return m * d + n; };
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            const int i = idx(m, n);
            h(i, i) = p.omega_c * m + p.omega_b * n + p.D * (2 * m + 1);
            // i g1 a b^dag  and  -i g1 a^dag b
            if (m - 1 >= 0 && n + 1 < d)
                h(idx(m - 1, n + 1), i) += kI * p.g1 * std::sqrt(double(m) * (n + 1));
            if (m + 1 < d && n - 1 >= 0)
                h(idx(m + 1, n - 1), i) += -kI * p.g1 * std::sqrt(double(m + 1) * n);
            // i g2 a^dag b^dag  and  -i g2 a b
            if (m + 1 < d && n + 1 < d)
                h(idx(m + 1, n + 1), i) += kI * p.g2 * std::sqrt(double(m + 1) * (n + 1));
            if (m - 1 >= 0 && n - 1 >= 0)
                h(idx(m - 1, n - 1), i) += -kI * p.g2 * std::sqrt(double(m) * n);
            if (m + 2 < d)
                h(idx(m + 2, n), i) += p.D * std::sqrt(double(m + 1) * (m + 2));
            if (m - 2 >= 0)
                h(idx(m - 2, n), i) += p.D * std::sqrt(double(m) * (m - 1));
        }
    return h;
}

std::pair<std::vector<int>, std::vector<int>> parity_indices(int cutoff) {
    std::vector<int> even, odd;
    const int d = cutoff + 1;
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            ((m + n) % 2 == 0 ? even : odd).push_back(m * d + n);
    return {even, odd};
}

SectorBasis::SectorBasis(int cutoff, int parity)
    : cutoff_(cutoff), parity_(parity), counts_(cutoff + 1), offsets_(cutoff + 1) {
    int off = 0;
    for (int n = 0; n <= cutoff; ++n) {
        offsets_[n] = off;
        const int m0 = (n + parity) % 2;
        counts_[n] = (cutoff - m0) / 2 + 1;
        off += counts_[n];
    }
    size_ = off;
}

std::pair<int, int> SectorBasis::state_of(int idx) const {
    const int n = int(std::upper_bound(offsets_.begin(), offsets_.end(), idx) -
                      offsets_.begin()) - 1;
    return {first_m(n) + 2 * (idx - offsets_[n]), n};
}

BandedSector build_sector_banded(const ModelParams& p, int cutoff, int parity) {
    p.validate();
    if (cutoff < 2) throw InvalidParams("cutoff must be >= 2");
    SectorBasis basis(cutoff, parity);
    const int ns = basis.size();

    // half-bandwidth: couplings reach at most one matter row ahead
    int kd = 0;
    for (int n = 0; n < cutoff; ++n)
        kd = std::max(kd, basis.row_count(n) + 1);

    BandedSector b{std::move(basis), kd, std::vector<double>(std::size_t(kd + 1) * ns, 0.0)};
    auto at = [&](int i, int j) -> double& {  // i >= j
        return b.ab[std::size_t(i - j) + std::size_t(j) * (kd + 1)];
    };
    const auto& sb = b.basis;
    for (int i = 0; i < ns; ++i) {
        const auto [m, n] = sb.state_of(i);
        at(i, i) = p.omega_c * m + p.omega_b * n + p.D * (2 * m + 1);
        if (m + 2 <= cutoff)
            at(sb.index_of(m + 2, n), i) += p.D * std::sqrt(double(m + 1) * (m + 2));
        if (n + 1 <= cutoff) {
            if (m - 1 >= 0)
                at(sb.index_of(m - 1, n + 1), i) += p.g1 * std::sqrt(double(m) * (n + 1));
            if (m + 1 <= cutoff)
                at(sb.index_of(m + 1, n + 1), i) += p.g2 * std::sqrt(double(m + 1) * (n + 1));
        }
    }
    return b;
}

std::vector<double> sector_eigenvalues(const ModelParams& p, int cutoff, int parity) {
    BandedSector b = build_sector_banded(p, cutoff, parity);
    const int n = b.basis.size();
    std::vector<double> w(n);
    int info = LAPACKE_dsbev_2stage(LAPACK_COL_MAJOR, 'N', 'L', n, b.kd, b.ab.data(),
                                    b.kd + 1, w.data(), nullptr, 1);
    if (info != 0) {
        // fall back to the classic one-stage driver
        b = build_sector_banded(p, cutoff, parity);
        info = LAPACKE_dsbev(LAPACK_COL_MAJOR, 'N', 'L', n, b.kd, b.ab.data(),
                             b.kd + 1, w.data(), nullptr, 1);
        lapack_check(info, "dsbev");
    }
    return w;
}

std::vector<double> truncated_eigenvalues(const ModelParams& p, int cutoff) {
    std::vector<double> all = sector_eigenvalues(p, cutoff, 0);
    const std::vector<double> odd = sector_eigenvalues(p, cutoff, 1);
    all.insert(all.end(), odd.begin(), odd.end());
    std::sort(all.begin(), all.end());
    return all;
}

namespace {

// Block-tridiagonal view of one parity sector: diagonal blocks D_n across a
// matter row (tridiagonal from the a^2 term), off-diagonal blocks B_n with at
// most two entries per column (g1, g2 terms).
struct BlockSector {
    SectorBasis basis;
    ModelParams p;

    int block_size(int n) const { return basis.row_count(n); }

    void fill_diag(int n, double sigma, Eigen::MatrixXd& d) const {
        const int c = block_size(n);
        d.setZero(c, c);
        const int m0 = basis.first_m(n);
        for (int k = 0; k < c; ++k) {
            const int m = m0 + 2 * k;
            d(k, k) = p.omega_c * m + p.omega_b * n + p.D * (2 * m + 1) - sigma;
            if (k + 1 < c) {
                const double v = p.D * std::sqrt(double(m + 1) * (m + 2));
                d(k + 1, k) = d(k, k + 1) = v;
            }
        }
    }

    // B_n maps row n+1 components to row n: B[k, k'] = <m_k, n| H |m'_k', n+1>
    void fill_offdiag(int n, Eigen::MatrixXd& bmat) const {
        const int c = block_size(n), c2 = block_size(n + 1);
        bmat.setZero(c, c2);
        const int m0 = basis.first_m(n), m0p = basis.first_m(n + 1);
        for (int k = 0; k < c; ++k) {
            const int m = m0 + 2 * k;
            if (m - 1 >= 0) {
                const int kp = (m - 1 - m0p) / 2;
                bmat(k, kp) += p.g1 * std::sqrt(double(m) * (n + 1));
            }
            if (m + 1 <= basis.cutoff()) {
                const int kp = (m + 1 - m0p) / 2;
                bmat(k, kp) += p.g2 * std::sqrt(double(m + 1) * (n + 1));
            }
        }
    }
};

// negative eigenvalues of a dsytrf-factored matrix (Bunch-Kaufman blocks)
int negatives_from_ldlt(const Eigen::MatrixXd& a, const std::vector<lapack_int>& ipiv,
                        bool& singular) {
    const int n = int(a.rows());
    int neg = 0;
    for (int k = 0; k < n;) {
        if (ipiv[k] > 0) {
            const double d = a(k, k);
            if (d == 0.0) { singular = true; return neg; }
            if (d < 0.0) ++neg;
            ++k;
        } else {
            const double d11 = a(k, k), d22 = a(k + 1, k + 1), od = a(k + 1, k);
            const double det = d11 * d22 - od * od;
            if (det == 0.0) { singular = true; return neg; }
            if (det < 0.0) ++neg;            // one of each sign
            else if (d11 + d22 < 0.0) neg += 2;
            k += 2;
        }
    }
    return neg;
}

struct InertiaResult {
    int count;
    bool singular;
};

InertiaResult sector_inertia(const BlockSector& bs, double sigma) {
    const int rows = bs.basis.rows();
    Eigen::MatrixXd s, bmat, w;
    std::vector<lapack_int> ipiv;
    int count = 0;
    for (int n = 0; n < rows; ++n) {
        const int c = bs.block_size(n);
        Eigen::MatrixXd d(c, c);
        bs.fill_diag(n, sigma, d);
        if (n > 0) d.noalias() -= bmat.transpose() * w;  // - B^t S^{-1} B
        s = d;
        ipiv.assign(c, 0);
        int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', c, s.data(), c, ipiv.data());
        if (info > 0) return {count, true};
        lapack_check(info, "dsytrf");
        bool singular = false;
        count += negatives_from_ldlt(s, ipiv, singular);
        if (singular) return {count, true};
        if (n + 1 < rows) {
            bmat.resize(c, bs.block_size(n + 1));
            bs.fill_offdiag(n, bmat);
            w = bmat;
            info = LAPACKE_dsytrs(LAPACK_COL_MAJOR, 'L', c, int(w.cols()), s.data(), c,
                                  ipiv.data(), w.data(), c);
            lapack_check(info, "dsytrs");
        }
    }
    return {count, false};
}

struct GershgorinBounds {
    double lo, hi;
};

GershgorinBounds gershgorin(const BandedSector& b) {
    const int n = b.basis.size();
    std::vector<double> radius(n, 0.0);
    std::vector<double> center(n);
    for (int j = 0; j < n; ++j) {
        center[j] = b.ab[std::size_t(j) * (b.kd + 1)];
        for (int off = 1; off <= b.kd && j + off < n; ++off) {
            const double v = b.ab[std::size_t(off) + std::size_t(j) * (b.kd + 1)];
            radius[j] += std::abs(v);
            radius[j + off] += std::abs(v);
        }
    }
    GershgorinBounds g{center[0] - radius[0], center[0] + radius[0]};
    for (int j = 1; j < n; ++j) {
        g.lo = std::min(g.lo, center[j] - radius[j]);
        g.hi = std::max(g.hi, center[j] + radius[j]);
    }
    return g;
}

}  // namespace

int sector_eigenvalue_count_below(const ModelParams& p, int cutoff, int parity,
                                  double sigma) {
    p.validate();
    BlockSector bs{SectorBasis(cutoff, parity), p};
    InertiaResult r = sector_inertia(bs, sigma);
    double eps = std::max(1.0, std::abs(sigma)) * 1e-13;
    while (r.singular) {
        r = sector_inertia(bs, sigma + eps);
        eps *= 2.0;
    }
    return r.count;
}

double sector_eigenvalue(const ModelParams& p, int cutoff, int parity, int k,
                         double tol) {
    p.validate();
    const BandedSector band = build_sector_banded(p, cutoff, parity);
    const GershgorinBounds g = gershgorin(band);
    BlockSector bs{SectorBasis(cutoff, parity), p};

    auto count = [&](double sigma) {
        InertiaResult r = sector_inertia(bs, sigma);
        double eps = std::max(1.0, std::abs(sigma)) * 1e-13;
        while (r.singular) {
            r = sector_inertia(bs, sigma + eps);
            eps *= 2.0;
        }
        return r.count;
    };

    double lo = g.lo, hi = g.hi;  // count(lo) = 0 <= k, count(hi) = n >= k+1
    while (hi - lo > tol * std::max(1.0, std::abs(lo) + std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        if (count(mid) >= k + 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

OracleGaps lowest_gaps(const ModelParams& p, int cutoff, double tol) {
    OracleGaps r;
    r.ground = sector_eigenvalue(p, cutoff, 0, 0, tol);
    const double o1 = sector_eigenvalue(p, cutoff, 1, 0, tol);
    const double o2 = sector_eigenvalue(p, cutoff, 1, 1, tol);
    r.omega_y = o1 - r.ground;
    r.omega_x = o2 - r.ground;
    return r;
}

std::vector<double> eigenspectrum(const Eigen::MatrixXd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    const auto& v = es.eigenvalues();
    return std::vector<double>(v.data(), v.data() + v.size());
}

std::vector<double> eigenspectrum(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    const auto& v = es.eigenvalues();
    return std::vector<double>(v.data(), v.data() + v.size());
}

std::vector<double> convergence_estimates(std::span<const double> fine,
                                          std::span<const double> coarse) {
    std::vector<double> est;
    est.reserve(coarse.size());
    for (double e : coarse) {
        double best = std::numeric_limits<double>::infinity();
        // fine is sorted: binary search for the nearest entry
        auto it = std::lower_bound(fine.begin(), fine.end(), e);
        if (it != fine.end()) best = std::min(best, std::abs(*it - e));
        if (it != fine.begin()) best = std::min(best, std::abs(*std::prev(it) - e));
        est.push_back(best);
    }
    return est;
}

HeisenbergPropagator::HeisenbergPropagator(const ModelParams& p, int cutoff)
    : cutoff_(cutoff), even_(cutoff, 0), odd_(cutoff, 1) {
    p.validate();
    const PolaritonSpectrum s = polariton_frequencies(p);
    if (s.phase == Phase::Unstable)
        throw UnstablePhase("propagation undefined for omega_y^2 < 0");
    check_dense_budget(std::size_t(even_.size()), sizeof(double));

    for (int parity = 0; parity < 2; ++parity) {
        const SectorBasis& sb = parity == 0 ? even_ : odd_;
        const int n = sb.size();
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            const auto [m, nn] = sb.state_of(i);
            h(i, i) = p.omega_c * m + p.omega_b * nn + p.D * (2 * m + 1);
            if (m + 2 <= cutoff)
                h(sb.index_of(m + 2, nn), i) = p.D * std::sqrt(double(m + 1) * (m + 2));
            if (nn + 1 <= cutoff) {
                if (m - 1 >= 0)
                    h(sb.index_of(m - 1, nn + 1), i) =
                        p.g1 * std::sqrt(double(m) * (nn + 1));
                if (m + 1 <= cutoff)
                    h(sb.index_of(m + 1, nn + 1), i) =
                        p.g2 * std::sqrt(double(m + 1) * (nn + 1));
            }
        }
        h = h.selfadjointView<Eigen::Lower>();
        Eigen::VectorXd w(n);
        const int info =
            LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, h.data(), n, w.data());
        lapack_check(info, "dsyevd");
        if (parity == 0) {
            v_even_ = std::move(h);
            e_even_ = std::move(w);
        } else {
            v_odd_ = std::move(h);
            e_odd_ = std::move(w);
        }
    }
}

void HeisenbergPropagator::record_leak(const Eigen::VectorXcd& v, int parity) {
    const SectorBasis& sb = parity == 0 ? even_ : odd_;
    const int margin = 4;
    double pop = 0.0;
    for (int i = 0; i < v.size(); ++i) {
        const auto [m, n] = sb.state_of(i);
        if (m >= cutoff_ - margin || n >= cutoff_ - margin) pop += std::norm(v[i]);
    }
    leak_.max_population = std::max(leak_.max_population, pop);
    leak_.warning = leak_.max_population > 1e-8;
}

Eigen::VectorXcd HeisenbergPropagator::evolve(int parity, const Eigen::VectorXcd& v,
                                              double dt) {
    const Eigen::MatrixXd& V = parity == 0 ? v_even_ : v_odd_;
    const Eigen::VectorXd& E = parity == 0 ? e_even_ : e_odd_;
    Eigen::VectorXcd w = V.transpose() * v;
    for (int i = 0; i < w.size(); ++i) w[i] *= std::exp(-kI * E[i] * dt);
    Eigen::VectorXcd out = V * w;
    record_leak(out, parity);
    return out;
}

std::array<std::vector<Complex>, 4> HeisenbergPropagator::field_coeffs(
    std::span<const double> t_grid) {
    const int ne = even_.size(), no = odd_.size();
    const int nt = int(t_grid.size());

    // Evolve |0,0>, |1,0>, |0,1> over the whole grid at once (phases batched
    // into a GEMM against the eigenvector matrix).
    auto batch = [&](int parity, int state_idx) {
        const Eigen::MatrixXd& V = parity == 0 ? v_even_ : v_odd_;
        const Eigen::VectorXd& E = parity == 0 ? e_even_ : e_odd_;
        const Eigen::VectorXd w = V.row(state_idx).transpose();
        Eigen::MatrixXcd phases(V.cols(), nt);
        for (int k = 0; k < nt; ++k)
            for (int i = 0; i < V.cols(); ++i)
                phases(i, k) = w[i] * std::exp(-kI * E[i] * t_grid[k]);
        Eigen::MatrixXcd psi = V * phases;
        for (int k = 0; k < nt; ++k) record_leak(psi.col(k), parity);
        return psi;
    };
    const Eigen::MatrixXcd psi00 = batch(0, even_.index_of(0, 0));
    const Eigen::MatrixXcd psi10 = batch(1, odd_.index_of(1, 0));
    const Eigen::MatrixXcd psi01 = batch(1, odd_.index_of(0, 1));

    // apply the bare annihilation operator: a |m,n> = sqrt(m) |m-1,n>
    auto apply_a = [&](const Eigen::MatrixXcd& psi, int parity) {
        const SectorBasis& from = parity == 0 ? even_ : odd_;
        const SectorBasis& to = parity == 0 ? odd_ : even_;
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(to.size(), psi.cols());
        for (int i = 0; i < from.size(); ++i) {
            const auto [m, n] = from.state_of(i);
            if (m > 0) out.row(to.index_of(m - 1, n)) = std::sqrt(double(m)) * psi.row(i);
        }
        return out;
    };
    const Eigen::MatrixXcd a_psi10 = apply_a(psi10, 1);  // in even sector
    const Eigen::MatrixXcd a_psi01 = apply_a(psi01, 1);
    const Eigen::MatrixXcd a_psi00 = apply_a(psi00, 0);  // in odd sector

    std::array<std::vector<Complex>, 4> f;
    for (auto& v : f) v.resize(nt);
    for (int k = 0; k < nt; ++k) {
        // original-frame mapping: f3 = -i f3_rot, f4 = +i f4_rot
        f[0][k] = psi00.col(k).dot(a_psi10.col(k));
        f[1][k] = psi10.col(k).dot(a_psi00.col(k));
        f[2][k] = -kI * psi00.col(k).dot(a_psi01.col(k));
        f[3][k] = kI * psi01.col(k).dot(a_psi00.col(k));
    }
    return f;
}

Complex HeisenbergPropagator::autocorrelation(FockProduct state, double t1, double t2) {
    if (state.n < 0 || state.m < 0 || state.n > cutoff_ || state.m > cutoff_)
        throw InvalidParams("Fock occupations outside truncation");
    const int parity = (state.n + state.m) % 2;
    const SectorBasis& sb = parity == 0 ? even_ : odd_;
    Eigen::VectorXcd init = Eigen::VectorXcd::Zero(sb.size());
    init[sb.index_of(state.n, state.m)] = 1.0;

    auto chi = [&](double t) {
        const Eigen::VectorXcd psi = evolve(parity, init, t);
        const SectorBasis& to = parity == 0 ? odd_ : even_;
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(to.size());
        for (int i = 0; i < sb.size(); ++i) {
            const auto [m, n] = sb.state_of(i);
            if (m > 0) out[to.index_of(m - 1, n)] = std::sqrt(double(m)) * psi[i];
        }
        return out;
    };
    const Eigen::VectorXcd c1 = chi(t1);
    const Eigen::VectorXcd c2 = chi(t2);
    // <chi(t1)| e^{-i H (t1 - t2)} |chi(t2)>
    return c1.dot(evolve(1 - parity, c2, t1 - t2));
}

Eigen::MatrixXcd HeisenbergPropagator::evolved_operator(Op op, double t) const {
    const int d = cutoff_ + 1;
    const std::size_t dim = std::size_t(d) * d;
    check_dense_budget(dim, sizeof(Complex), 4);

    // assemble U(t) = V e^{-iEt} V^t in the full lexicographic basis
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
    for (int parity = 0; parity < 2; ++parity) {
        const SectorBasis& sb = parity == 0 ? even_ : odd_;
        const Eigen::MatrixXd& V = parity == 0 ? v_even_ : v_odd_;
        const Eigen::VectorXd& E = parity == 0 ? e_even_ : e_odd_;
        Eigen::MatrixXcd ph = V.cast<Complex>();
        for (int c = 0; c < ph.cols(); ++c) ph.col(c) *= std::exp(-kI * E[c] * t);
        Eigen::MatrixXcd usec = ph * V.transpose().cast<Complex>();
        std::vector<int> lex(sb.size());
        for (int i = 0; i < sb.size(); ++i) {
            const auto [m, n] = sb.state_of(i);
            lex[i] = m * d + n;
        }
        for (int i = 0; i < sb.size(); ++i)
            for (int j = 0; j < sb.size(); ++j) u(lex[i], lex[j]) = usec(i, j);
    }

    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            if (op == Op::a && m > 0)
                a(std::size_t(m - 1) * d + n, std::size_t(m) * d + n) = std::sqrt(double(m));
            if (op == Op::b && n > 0)
                a(std::size_t(m) * d + n - 1, std::size_t(m) * d + n) = std::sqrt(double(n));
        }
    Eigen::MatrixXcd evolved = u.adjoint() * a * u;

    // frame mapping X_orig(t) = T^dag [U^dag (T X T^dag) U] T with
    // T = e^{-i pi b^t b / 2}: T a T^dag = a, T b T^dag = i b
    if (op == Op::b) evolved *= kI;
    for (int i = 0; i < int(dim); ++i)
        for (int j = 0; j < int(dim); ++j) {
            const int ni = i % d, nj = j % d;
            evolved(i, j) *= std::exp(kI * (M_PI / 2.0) * double(ni - nj));
        }
    return evolved;
}

LadderThermo ladder_thermo(const ModelParams& p, double T, double tail_rel,
                           int max_terms) {
    p.validate();
    if (!(T > 0.0)) throw InvalidParams("temperature must be > 0");
    const PolaritonSpectrum s = polariton_frequencies(p);
    if (s.phase == Phase::Critical)
        throw CriticalPhase("ladder sums diverge at omega_y = 0");
    if (s.phase == Phase::Unstable)
        throw UnstablePhase("no thermal ladder for omega_y^2 < 0");
    const double wx = s.omega_x(), wy = s.omega_y();

    // per-axis cutoffs from the geometric tails
    auto terms_needed = [&](double w) {
        const double q = std::exp(-w / T);
        const double n = std::log(tail_rel * (1.0 - q)) / std::log(q);
        return int(std::ceil(n)) + 2;
    };
    const int mmax = terms_needed(wx), nmax = terms_needed(wy);
    if (double(mmax) * nmax > double(max_terms))
        throw TailNotConverged("ladder needs " + std::to_string(double(mmax) * nmax) +
                               " terms, cap is " + std::to_string(max_terms));

    long double z = 0.0L, e1 = 0.0L, e2 = 0.0L;
    for (int m = 0; m < mmax; ++m)
        for (int n = 0; n < nmax; ++n) {
            const long double e = wx * (m + 0.5L) + wy * (n + 0.5L);
            const long double b = std::exp(-double(e) / T);
            z += b;
            e1 += e * b;
            e2 += e * e * b;
        }
    LadderThermo r;
    r.Z = double(z);
    r.U = double(e1 / z);
    const long double var = e2 / z - (e1 / z) * (e1 / z);
    r.C = double(var) / (T * T);
    r.m_terms = mmax;
    r.n_terms = nmax;
    return r;
}

}  // namespace oracle
}  // namespace hopfield
