#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hopfield/oracle.hpp"

using namespace hopfield;
using namespace hopfield::oracle;

TEST_CASE("dense builders: uncoupled case is diagonal") {
    const ModelParams p{1.0, 2.0, 0.0, 0.0, 0.0};
    const auto h = build_rotated_dense(p, 4);
    CHECK(h.isDiagonal(1e-15));
    const auto ev = eigenspectrum(h);
    CHECK(ev.front() == doctest::Approx(0.0));
    // entries omega_c m + omega_b n, sorted
    CHECK(ev[1] == doctest::Approx(1.0));
    CHECK(std::count_if(ev.begin(), ev.end(), [](double e) {
              return std::abs(e - 2.0) < 1e-12;
          }) == 2);
}

TEST_CASE("parity block structure") {
    const ModelParams p{1.0, 0.9, 0.3, 0.2, 0.1};
    const auto h = build_rotated_dense(p, 8);
    const auto hc = build_original_dense(p, 8);
    CHECK(hc.isApprox(hc.adjoint(), 1e-14));
    const auto [even, odd] = parity_indices(8);
    for (int i : even)
        for (int j : odd) {
            CHECK(h(i, j) == 0.0);
            CHECK(std::abs(hc(i, j)) == 0.0);
        }
}

TEST_CASE("representation equivalence: rotated vs original spectra") {
    // T = exp(-i pi b^dag b / 2) is diagonal in the Fock basis, so it maps the
    // truncated space onto itself and the two truncated spectra are identical.
    const ModelParams p{1.0, 1.2, 0.35, 0.2, 0.1};
    const auto er = eigenspectrum(build_rotated_dense(p, 14));
    const auto eo = eigenspectrum(build_original_dense(p, 14));
    for (std::size_t k = 0; k < er.size(); ++k)
        CHECK(er[k] == doctest::Approx(eo[k]).epsilon(1e-10));
}

TEST_CASE("sector basis indexing round-trips") {
    for (int parity : {0, 1}) {
        const SectorBasis sb(9, parity);
        for (int i = 0; i < sb.size(); ++i) {
            const auto [m, n] = sb.state_of(i);
            CHECK((m + n) % 2 == parity);
            CHECK(sb.index_of(m, n) == i);
        }
    }
    CHECK(SectorBasis(9, 0).size() + SectorBasis(9, 1).size() == 100);
}

TEST_CASE("banded sectors reproduce the dense spectrum") {
    const ModelParams p{1.0, 0.8, 0.3, 0.45, 0.2};
    const int N = 12;
    auto all = truncated_eigenvalues(p, N);
    const auto dense = eigenspectrum(build_rotated_dense(p, N));
    REQUIRE(all.size() == dense.size());
    for (std::size_t k = 0; k < all.size(); ++k)
        CHECK(all[k] == doctest::Approx(dense[k]).epsilon(1e-11));
}

TEST_CASE("inertia slicing matches the banded solver") {
    const ModelParams p{1.0, 1.1, 0.4, 0.3, 0.12};
    const int N = 24;
    for (int parity : {0, 1}) {
        const auto full = sector_eigenvalues(p, N, parity);
        for (int k : {0, 1, 2, 7}) {
            const double ek = sector_eigenvalue(p, N, parity, k, 1e-11);
            CHECK(ek == doctest::Approx(full[k]).epsilon(1e-9));
        }
        // count is consistent with the spectrum
        const double mid = 0.5 * (full[3] + full[4]);
        CHECK(sector_eigenvalue_count_below(p, N, parity, mid) == 4);
    }
}

TEST_CASE("lowest gaps converge to the polariton frequencies") {
    const ModelParams p{1.0, 1.0, 0.3, 0.3, 0.09};
    const auto s = polariton_frequencies(p);
    const auto g40 = lowest_gaps(p, 40);
    const auto g80 = lowest_gaps(p, 80);
    const double err40 = std::abs(g40.omega_y - s.omega_y());
    const double err80 = std::abs(g80.omega_y - s.omega_y());
    CHECK(err80 <= err40 + 1e-12);
    CHECK(g80.omega_y == doctest::Approx(s.omega_y()).epsilon(1e-8));
    CHECK(g80.omega_x == doctest::Approx(s.omega_x()).epsilon(1e-8));
    // normal-ordered ground energy: (omega_x + omega_y)/2 - (omega_c + omega_b)/2
    CHECK(g80.ground ==
          doctest::Approx((s.omega_x() + s.omega_y()) / 2 - 1.0).epsilon(1e-7));
}

TEST_CASE("convergence estimates flag truncation artifacts") {
    const ModelParams p = ModelParams::resonant_trk(1.5);
    const auto fine = truncated_eigenvalues(p, 60);
    const auto coarse = truncated_eigenvalues(p, 50);
    const auto est = convergence_estimates(fine, coarse);
    // low levels converged, high levels not
    CHECK(est[0] < 1e-10);
    CHECK(est[3] < 1e-9);
    CHECK(*std::max_element(est.begin(), est.end()) > 1e-3);
}

TEST_CASE("propagator reproduces the free field and the closed-form f_j") {
    std::vector<double> ts;
    for (int i = 0; i <= 40; ++i) ts.push_back(0.5 * i);

    {
        HeisenbergPropagator prop({1.0, 1.3, 0.0, 0.0, 0.0}, 12);
        const auto f = prop.field_coeffs(ts);
        for (std::size_t k = 0; k < ts.size(); ++k) {
            CHECK(std::abs(f[0][k] - std::exp(Complex(0, -ts[k]))) < 1e-12);
            for (int j : {1, 2, 3}) CHECK(std::abs(f[j][k]) < 1e-12);
        }
        CHECK(!prop.leak().warning);
    }

    for (auto p : {ModelParams::resonant_trk(0.35), ModelParams{1.0, 0.8, 0.25, 0.25, 0.078125}}) {
        HeisenbergPropagator prop(p, 40);
        const auto fo = prop.field_coeffs(ts);
        const FieldEvolution fa(p);
        double sup = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const auto fk = fa.coeffs(ts[k]);
            for (int j = 0; j < 4; ++j)
                sup = std::max(sup, std::abs(fo[j][k] - fk[j]));
        }
        CHECK(sup < 1e-10);
        CHECK(!prop.leak().warning);
    }
}

TEST_CASE("propagator autocorrelation matches the mu-table result") {
    const ModelParams p = ModelParams::resonant_trk(0.35);
    HeisenbergPropagator prop(p, 40);
    const FieldEvolution fa(p);
    for (auto [t1, t2] : {std::pair{2.0, 2.0}, {0.7, 1.3}, {5.0, 1.0}}) {
        for (FockProduct st : {FockProduct{1, 0}, {0, 1}, {0, 0}, {2, 1}}) {
            const Complex a = prop.autocorrelation(st, t1, t2);
            const Complex b = autocorrelation(fa, st, t1, t2);
            CHECK(std::abs(a - b) < 1e-9);
        }
    }
}

TEST_CASE("evolved operator: unitarity of the commutator on the low block") {
    const ModelParams p = ModelParams::resonant_trk(0.3);
    HeisenbergPropagator prop(p, 30);
    const auto at = prop.evolved_operator(HeisenbergPropagator::Op::a, 1.7);
    const Eigen::MatrixXcd comm = at * at.adjoint() - at.adjoint() * at;
    const int d = 31;
    // low-occupation block: truncation noise only enters near the cutoff
    for (int m = 0; m < 6; ++m)
        for (int n = 0; n < 6; ++n) {
            const int i = m * d + n;
            for (int mp = 0; mp < 6; ++mp)
                for (int np = 0; np < 6; ++np) {
                    const int j = mp * d + np;
                    const Complex expect = (i == j) ? 1.0 : 0.0;
                    CHECK(std::abs(comm(i, j) - expect) < 1e-8);
                }
        }

    // b(t) at g = 0 evolves freely
    HeisenbergPropagator free({1.0, 1.4, 0.0, 0.0, 0.0}, 10);
    const auto bt = free.evolved_operator(HeisenbergPropagator::Op::b, 2.0);
    Eigen::MatrixXcd b0 = Eigen::MatrixXcd::Zero(121, 121);
    for (int m = 0; m < 11; ++m)
        for (int n = 1; n < 11; ++n)
            b0(m * 11 + n - 1, m * 11 + n) = std::sqrt(double(n));
    CHECK((bt - std::exp(Complex(0, -1.4 * 2.0)) * b0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("truncation leak is reported") {
    // tiny cutoff with strong counterrotating drive: population reaches the edge
    HeisenbergPropagator prop(ModelParams::resonant_trk(0.45), 4);
    std::vector<double> ts{0.0, 2.0, 5.0, 9.0};
    (void)prop.field_coeffs(ts);
    CHECK(prop.leak().warning);
    CHECK(prop.leak().max_population > 1e-8);
}

TEST_CASE("cutoff guards") {
    CHECK_THROWS_AS(build_rotated_dense(ModelParams{}, 1), InvalidParams);
    CHECK_THROWS_AS(build_rotated_dense(ModelParams{}, 1000), CutoffTooLarge);
}

TEST_CASE("spectral collapse near the critical coupling") {
    // D = 0, g just below g_crit: the lowest gap follows omega_y -> 0
    const ModelParams p{1.0, 1.0, 0.49, 0.49, 0.0};
    const auto s = polariton_frequencies(p);
    REQUIRE(s.phase == Phase::Normal);
    const auto g60 = lowest_gaps(p, 60);
    CHECK(g60.omega_y == doctest::Approx(s.omega_y()).epsilon(1e-6));
    CHECK(g60.omega_y < 0.15);
}

TEST_CASE("ladder heat capacity vanishes exponentially at low T") {
    const ModelParams p{1.0, 1.0, 0.3, 0.3, 0.09};
    const double wy = polariton_frequencies(p).omega_y();
    const auto cold = ladder_thermo(p, 0.05);
    const auto colder = ladder_thermo(p, 0.04);
    CHECK(cold.C < 10.0 * std::exp(-wy / 0.05) * std::pow(wy / 0.05, 2));
    CHECK(colder.C < cold.C);
}
