#include <doctest.h>

#include <cmath>
#include <random>

#include "hopfield/model.hpp"

using namespace hopfield;

namespace {

// direct isotropic root form, valid for g1 = g2: reference route for the reduction check.
std::pair<double, double> isotropic_freqs_sq(double wc, double wb, double g, double D) {
    const double a = wc * wc + wb * wb + 4 * D * wc;
    const double r = std::sqrt(std::pow(wc * wc - wb * wb + 4 * D * wc, 2) +
                               16 * g * g * wc * wb);
    return {(a + r) / 2, (a - r) / 2};
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((ModelParams{0.0, 1.0}).validate(), InvalidParams);
    CHECK_THROWS_AS((ModelParams{1.0, -1.0}).validate(), InvalidParams);
    CHECK_THROWS_AS((ModelParams{1.0, 1.0, -0.1, 0.0, 0.0}).validate(), InvalidParams);
    CHECK_NOTHROW(ModelParams{}.validate());
}

TEST_CASE("squeezing validity |lambda2| < 1") {
    ModelParams p{1.0, 1.0, 1.2, 0.1, 0.0};  // lambda2 = 1.1
    CHECK(!p.squeezing_valid());
    CHECK_THROWS_AS(polariton_frequencies(p), InvalidSqueezing);
    CHECK_THROWS_AS(derived_quantities(p), InvalidSqueezing);
    p.g2 = 0.3;
    CHECK(p.squeezing_valid());
    CHECK_NOTHROW(polariton_frequencies(p));
}

TEST_CASE("uncoupled resonant oscillators") {
    const auto s = polariton_frequencies({1.0, 1.0, 0.0, 0.0, 0.0});
    CHECK(s.omega_x() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.omega_y() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.phase == Phase::Normal);
}

TEST_CASE("critical point at g = omega_c/2 for D = 0") {
    const auto s = polariton_frequencies({1.0, 1.0, 0.5, 0.5, 0.0});
    CHECK(s.omega_y_sq == 0.0);
    CHECK(s.phase == Phase::Critical);
    CHECK(s.omega_y() == 0.0);
}

TEST_CASE("frozen example point") {
    // evaluated symbolically and cross-checked against the Fock oracle
    const auto s = polariton_frequencies({1.0, 1.0, 0.3, 0.3, 0.09});
    CHECK(s.omega_x() == doctest::Approx(1.344030651).epsilon(1e-8));
    CHECK(s.omega_y() == doctest::Approx(0.744030651).epsilon(1e-8));
}

TEST_CASE("unstable phase reported, not thrown") {
    const auto s = polariton_frequencies({1.0, 1.0, 0.8, 0.8, 0.0});
    CHECK(s.phase == Phase::Unstable);
    CHECK(s.omega_y_sq < 0.0);
    CHECK_THROWS_AS(s.omega_y(), UnstablePhase);
}

TEST_CASE("reduction to the isotropic closed form") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double wc = 0.5 + u(rng), wb = 0.5 + 1.5 * u(rng);
        const double g = 0.6 * u(rng), D = 0.5 * u(rng);
        const auto s = polariton_frequencies({wc, wb, g, g, D});
        const auto [x2, y2] = isotropic_freqs_sq(wc, wb, g, D);
        CHECK(s.omega_x_sq == doctest::Approx(x2).epsilon(1e-13));
        CHECK(s.omega_y_sq == doctest::Approx(y2).epsilon(1e-11));
        CHECK(s.omega_x_sq >= s.omega_y_sq);
    }
}

TEST_CASE("TRK product identity omega_x omega_y = omega_c omega_b") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double wc = 0.5 + u(rng), wb = 0.5 + 1.5 * u(rng);
        const double g = 3.0 * u(rng);
        const auto s = polariton_frequencies({wc, wb, g, g, g * g / wb});
        if (s.phase != Phase::Normal) continue;
        CHECK(s.omega_x() * s.omega_y() ==
              doctest::Approx(wc * wb).epsilon(1e-12));
    }
}

TEST_CASE("RWA frequencies") {
    ModelParams p{1.0, 1.0, 0.0, 0.0, 0.0};
    auto [x0, y0] = rwa_frequencies(p);
    CHECK(x0 == doctest::Approx(1.0));
    CHECK(y0 == doctest::Approx(1.0));

    p.g1 = 0.2;
    auto [x1, y1] = rwa_frequencies(p);
    CHECK(x1 == doctest::Approx(1.2).epsilon(1e-14));
    CHECK(y1 == doctest::Approx(0.8).epsilon(1e-14));

    // g2 = D = 0 conserves excitations, so the general formula reproduces the RWA exactly
    ModelParams q{1.0, 2.0, 0.3, 0.0, 0.0};
    const auto s = polariton_frequencies(q);
    auto [xr, yr] = rwa_frequencies(q);
    CHECK(s.omega_x() == doctest::Approx(xr).epsilon(1e-13));
    CHECK(s.omega_y() == doctest::Approx(yr).epsilon(1e-13));
}

TEST_CASE("RWA agreement at weak coupling") {
    for (double wb : {0.8, 1.0, 1.3}) {
        ModelParams p{1.0, wb, 0.01, 0.01, 0.0001};
        const auto s = polariton_frequencies(p);
        const auto [xr, yr] = rwa_frequencies(p);
        CHECK(std::abs(s.omega_x() - xr) < 1e-3);
        CHECK(std::abs(s.omega_y() - yr) < 1e-3);
    }
}

TEST_CASE("monotonic branches at resonance under the TRK rule") {
    double prev_x = 1.0, prev_y = 1.0;
    for (int i = 1; i <= 60; ++i) {
        const double g = 0.05 * i;
        const auto s = polariton_frequencies(ModelParams::resonant_trk(g));
        CHECK(s.omega_x() > prev_x);
        CHECK(s.omega_y() < prev_y);
        prev_x = s.omega_x();
        prev_y = s.omega_y();
    }
}

TEST_CASE("energy levels") {
    const ModelParams p = ModelParams::resonant_trk(0.3);
    CHECK(energy_level(p, 0, 0, true) == 0.0);
    const auto s = polariton_frequencies(p);
    CHECK(energy_level(p, 2, 3, true) ==
          doctest::Approx(2 * s.omega_x() + 3 * s.omega_y()).epsilon(1e-14));
    CHECK(energy_level(p, 0, 0, false) ==
          doctest::Approx((s.omega_x() + s.omega_y()) / 2).epsilon(1e-14));

    // spectral collapse: the whole n-ladder sits at zero at the transition
    const ModelParams crit{1.0, 1.0, 0.5, 0.5, 0.0};
    for (int n : {0, 1, 5, 40}) CHECK(energy_level(crit, 0, n, true) == 0.0);

    // equispaced ladder deep in the strong-coupling regime
    const ModelParams dsc = ModelParams::resonant_trk(3.0);
    const double e1 = energy_level(dsc, 1, 0, true);
    const double e2 = energy_level(dsc, 2, 0, true);
    CHECK(e2 - e1 == doctest::Approx(e1).epsilon(1e-12));

    CHECK_THROWS_AS(energy_level({1.0, 1.0, 0.8, 0.8, 0.0}, 0, 0, true),
                    UnstablePhase);
    CHECK_THROWS_AS(energy_level(p, -1, 0, true), InvalidParams);
}

TEST_CASE("critical diamagnetic strength") {
    CHECK(critical_diamagnetic({1.0, 1.0, 0.5, 0.5, 0.0}) == 0.0);
    CHECK(critical_diamagnetic({1.0, 2.0, 0.4, 0.6, 0.0}) ==
          doctest::Approx(-0.125).epsilon(1e-15));
    // the TRK value always suppresses the transition
    for (double g : {0.1, 0.7, 2.0}) {
        const double trk = g * g / 1.0;
        CHECK(trk > critical_diamagnetic({1.0, 1.0, g, g, trk}));
    }
}

TEST_CASE("critical coupling") {
    CHECK(critical_coupling({1.0, 1.0, 0.0, 0.0, 0.0}) == doctest::Approx(0.5));
    CHECK(critical_coupling({1.0, 4.0, 0.0, 0.0, 0.0}) == doctest::Approx(1.0));
    const double gc = critical_coupling({2.0, 2.0, 0.0, 0.0, 0.0});
    CHECK(gc == doctest::Approx(1.0));
    CHECK(polariton_frequencies({2.0, 2.0, gc, gc, 0.0}).phase == Phase::Critical);
    CHECK_THROWS_AS(critical_coupling({1.0, 1.0, 0.1, 0.1, 0.2}), InvalidParams);
    CHECK_THROWS_AS(critical_coupling({1.0, 1.0, 0.1, 0.2, 0.0}), NotIsotropic);
}

TEST_CASE("derived quantities of the diagonalization chain") {
    const ModelParams p{1.0, 1.3, 0.4, 0.2, 0.15};
    const auto d = derived_quantities(p);
    CHECK(d.Omega_x_sq == doctest::Approx(1.0 + 0.6).epsilon(1e-15));
    CHECK(d.Omega_y_sq == doctest::Approx(1.69).epsilon(1e-15));
    const double sum = d.Omega_x_sq + d.Omega_y_sq;
    CHECK(d.w1_sq ==
          doctest::Approx((1 + d.lambda2) * (sum + 2 * d.lambda1) / 2).epsilon(1e-15));
    CHECK(d.w2_sq ==
          doctest::Approx((1 - d.lambda2) * (sum - 2 * d.lambda1) / 2).epsilon(1e-15));
    CHECK(std::tan(2 * d.theta) ==
          doctest::Approx(2 * d.lambda_coupling / (d.w1_sq - d.w2_sq)).epsilon(1e-10));
    CHECK(d.r1 == doctest::Approx(std::log(std::sqrt(1 + d.lambda2))));
    CHECK(d.r2 == doctest::Approx(std::log(std::sqrt(1 - d.lambda2))));

    // w1 = w2 limit: theta = pi/4
    const auto deg = derived_quantities({1.0, 1.0, 0.0, 0.0, 0.0});
    CHECK(deg.theta == doctest::Approx(M_PI / 4));

    // the chain reproduces the polariton frequencies
    const auto s = polariton_frequencies(p);
    const double rad = std::sqrt(std::pow(d.w1_sq - d.w2_sq, 2) +
                                 4 * d.lambda_coupling * d.lambda_coupling);
    CHECK(s.omega_x_sq == doctest::Approx((d.w1_sq + d.w2_sq + rad) / 2).epsilon(1e-12));
    CHECK(s.omega_y_sq == doctest::Approx((d.w1_sq + d.w2_sq - rad) / 2).epsilon(1e-9));
}
