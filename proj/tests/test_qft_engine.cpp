#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "roughlab/qft_engine.hpp"

using namespace roughlab;
using gauss::HurstIndex;
using qft::FeynmanDiagram;
using qft::LegCounts;
using qft::LineType;
using qft::Rational;
using qft::VertexKind;

namespace {

FeynmanDiagram bubble_diagram() {
    FeynmanDiagram d;
    d.vertices = {VertexKind::sigma_plus, VertexKind::sigma_plus};
    d.lines = {{0, 1, LineType::phi1}, {0, 1, LineType::phi2}};
    return d;
}

FeynmanDiagram double_bubble_diagram() {
    FeynmanDiagram d;
    d.vertices.assign(4, VertexKind::sigma_plus);
    d.lines = {{1, 2, LineType::sigma_plus},
               {0, 1, LineType::phi1},
               {2, 3, LineType::phi1},
               {0, 3, LineType::phi2},
               {1, 2, LineType::phi2}};
    return d;
}

}  // namespace

TEST_CASE("degree of divergence formula") {
    CHECK(qft::degree_of_divergence({2, 0, 0}, HurstIndex(0.2)) == doctest::Approx(0.2));
    CHECK(qft::degree_of_divergence({4, 0, 0}, HurstIndex(0.15)) == doctest::Approx(-0.2));
    CHECK(qft::degree_of_divergence({0, 0, 2}, HurstIndex(0.2)) == doctest::Approx(-0.6));
    // exact rational arithmetic
    const Rational a(1, 5);
    CHECK(qft::degree_of_divergence({2, 0, 0}, a) == Rational(1, 5));
    CHECK(qft::degree_of_divergence({4, 0, 0}, a) == Rational(-3, 5));
}

TEST_CASE("degree from structure: bubble and double bubble") {
    const HurstIndex a02(0.2);
    const auto bub = bubble_diagram();
    CHECK(bub.internal_phi() == 2);
    CHECK(bub.internal_sigma() == 0);
    CHECK(bub.loops() == 1);  // one free internal momentum
    const LegCounts legs = bub.legs();
    CHECK(legs.n_sigma == 2);
    CHECK(legs.n_phi == 0);
    CHECK(legs.n_dphi == 0);
    CHECK(qft::degree_from_structure(bub, a02) == doctest::Approx(0.2));

    const auto dbub = double_bubble_diagram();
    CHECK(dbub.loops() == 2);  // two independent internal momenta
    CHECK(dbub.legs().n_sigma == 2);
    CHECK(qft::degree_from_structure(dbub, a02) == doctest::Approx(0.2));
}

TEST_CASE("invalid diagrams are rejected naming the violated relation") {
    FeynmanDiagram d;
    d.vertices = {VertexKind::sigma_plus, VertexKind::sigma_plus, VertexKind::sigma_plus};
    d.lines = {{0, 1, LineType::sigma_plus}, {0, 2, LineType::sigma_plus}};
    CHECK_THROWS_WITH_AS(d.validate(), doctest::Contains("2 I_sigma + N_sigma = V"),
                         std::invalid_argument);

    FeynmanDiagram mixed;
    mixed.vertices = {VertexKind::sigma_plus, VertexKind::sigma_minus};
    mixed.lines = {{0, 1, LineType::sigma_plus}};
    CHECK_THROWS_AS(mixed.validate(), std::invalid_argument);

    FeynmanDiagram self_loop;
    self_loop.vertices = {VertexKind::sigma_plus};
    self_loop.lines = {{0, 0, LineType::phi1}};
    CHECK_THROWS_AS(self_loop.validate(), std::invalid_argument);
}

TEST_CASE("oracle pair: structural degree equals leg-count degree, exactly") {
    const Rational alphas[] = {Rational(1, 5), Rational(3, 20), Rational(1, 7)};
    for (int v = 1; v <= 4; ++v) {
        const auto diagrams = qft::enumerate_diagrams(v);
        int checked = 0;
        for (const auto& d : diagrams) {
            if (d.loops() < 0) continue;  // connected-diagram invariant
            for (const Rational& a : alphas) {
                const Rational lhs = qft::degree_from_structure(d, a);
                const Rational rhs = qft::degree_of_divergence(d.legs(), a);
                REQUIRE(lhs == rhs);
            }
            ++checked;
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("leg-structure enumeration against brute-force line multisets") {
    std::set<std::tuple<int, int, int>> brute;
    for (int v = 1; v <= 4; ++v)
        for (const auto& d : qft::enumerate_diagrams(v)) {
            const LegCounts l = d.legs();
            brute.insert({l.n_sigma, l.n_phi, l.n_dphi});
        }
    std::set<std::tuple<int, int, int>> incidence;
    for (const auto& s : qft::enumerate_leg_structures(4, HurstIndex(0.2)))
        incidence.insert({s.legs.n_sigma, s.legs.n_phi, s.legs.n_dphi});
    CHECK(brute == incidence);
}

TEST_CASE("divergent structure tables") {
    // v_max = 1: only (N_sigma=1, N_phi=1, N_dphi=1)
    const auto one = qft::enumerate_leg_structures(1, HurstIndex(0.2));
    REQUIRE(one.size() == 1);
    CHECK(one[0].legs.n_sigma == 1);
    CHECK(one[0].legs.n_phi == 1);
    CHECK(one[0].legs.n_dphi == 1);

    // alpha = 0.2: the two-point sigma function is the only divergent structure
    std::set<std::tuple<int, int, int>> divergent;
    for (const auto& s : qft::enumerate_leg_structures(6, HurstIndex(0.2)))
        if (s.divergent) divergent.insert({s.legs.n_sigma, s.legs.n_phi, s.legs.n_dphi});
    CHECK(divergent == std::set<std::tuple<int, int, int>>{{2, 0, 0}});

    // alpha = 0.05: 1 - 4 n a >= 0 up to n = 5, so all sigma-only pairs to 6 legs
    divergent.clear();
    for (const auto& s : qft::enumerate_leg_structures(6, HurstIndex(0.05)))
        if (s.divergent) divergent.insert({s.legs.n_sigma, s.legs.n_phi, s.legs.n_dphi});
    CHECK(divergent ==
          std::set<std::tuple<int, int, int>>{{2, 0, 0}, {4, 0, 0}, {6, 0, 0}});

    // diagrams with dphi legs are flagged convergent at any alpha < 1/2
    for (const auto& s : qft::enumerate_leg_structures(6, HurstIndex(0.2)))
        if (s.legs.n_dphi >= 2 && s.legs.n_phi == 0) CHECK(s.degree < 0.0);
}

TEST_CASE("c'_alpha quadrature against the Gamma closed form") {
    for (double a : {0.15, 0.2, 0.22}) {
        const double want = 1.0 / (2.0 * oracle::cos_power_moment_closed(4.0 * a));
        CHECK(qft::c_prime_alpha(HurstIndex(a)) == doctest::Approx(want).epsilon(1e-7));
    }
    CHECK_THROWS_AS(qft::c_prime_alpha(HurstIndex(0.3)), std::invalid_argument);
}

TEST_CASE("model params validation") {
    CHECK_THROWS_AS(qft::make_model_params(0.3, 0.1, 2.0, 1), std::invalid_argument);
    const auto p = qft::make_model_params(0.3, 0.1, 2.0, 1, false);
    CHECK(p.c_prime_alpha == 0.0);
    const auto q = qft::make_model_params(0.2, 0.1, 2.0, 1);
    CHECK(q.c_prime_alpha > 0.0);
    CHECK_THROWS_AS(qft::make_model_params(0.2, -1.0, 2.0, 1), std::invalid_argument);
}

TEST_CASE("bubble integral: sign, lambda scaling, cutoff growth") {
    const auto params = qft::make_model_params(0.2, 0.1, 2.0, 10);
    const double v1 = qft::bubble_integral(1.0, 64.0, params);
    CHECK(v1 < 0.0);  // diverging negative quantity
    CHECK(qft::bubble_integral(1.0, 64.0, params, true) < 0.0);

    const auto params2 = qft::make_model_params(0.2, 0.2, 2.0, 10);
    CHECK(qft::bubble_integral(1.0, 64.0, params2) == doctest::Approx(4.0 * v1).epsilon(1e-12));

    // amputated = non-amputated * |xi|^{2(1-4a)}
    const double xi = 0.5;
    const double na = qft::bubble_integral(xi, 64.0, params);
    const double am = qft::bubble_integral(xi, 64.0, params, true);
    CHECK(am == doctest::Approx(na * std::pow(xi, 2.0 * (1.0 - 4.0 * 0.2))).epsilon(1e-12));

    CHECK_THROWS_AS(qft::bubble_integral(1.0, 0.5, params), std::invalid_argument);
    CHECK_THROWS_AS(qft::bubble_integral(0.0, 2.0, params), std::invalid_argument);

    // fitted cutoff exponent of |amputated| ~ 1 - 4a
    std::vector<std::pair<double, double>> pts;
    for (int e = 16; e <= 32; e += 4) {
        const double cutoff = std::pow(2.0, e);
        pts.emplace_back(cutoff, -qft::bubble_integral(1.0, cutoff, params, true));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        const double lx = std::log(x), ly = std::log(y);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    const int m = static_cast<int>(pts.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(slope == doctest::Approx(0.2).epsilon(0.15));
}

TEST_CASE("measured bubble constant approaches the analytic brute-cutoff limit") {
    // For the sharp cutoff the large-cutoff coefficient is 1/(1-4a).
    for (double a : {0.15, 0.2}) {
        const double K = qft::measured_bubble_constant(HurstIndex(a));
        CHECK(K == doctest::Approx(1.0 / (1.0 - 4.0 * a)).epsilon(0.05));
    }
}

TEST_CASE("bubble series: geometric oracle, base case, monotone limit") {
    const auto params0 = qft::make_model_params(0.2, 0.1, 2.0, 0);
    const double K = 0.8;
    // rho = 0, xi = 1: value = lambda^{-2} K lambda^2 / (1 + K lambda^2)
    const double r = K * 0.01;
    CHECK(qft::bubble_series_sum(1.0, params0, K) ==
          doctest::Approx(100.0 * r / (1.0 + r)).epsilon(1e-14));

    // term-by-term geometric sum in the convergent regime
    double partial = 0.0;
    double sign = 1.0, rn = 1.0;
    for (int n = 0; n < 400; ++n) {
        partial += sign * rn;
        sign = -sign;
        rn *= r;
    }
    CHECK(100.0 * (1.0 - partial) ==
          doctest::Approx(qft::bubble_series_sum(1.0, params0, K)).epsilon(1e-12));

    // monotone increasing in rho toward lambda^{-2} |xi|^{1-4a}
    double prev = 0.0;
    for (int rho : {0, 5, 10, 20, 40, 80, 160}) {
        const auto p = qft::make_model_params(0.2, 0.1, 2.0, rho);
        const double v = qft::bubble_series_sum(1.0, p, 1.0);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(prev == doctest::Approx(100.0).epsilon(1e-4));

    CHECK_THROWS_AS(qft::bubble_series_sum(1.0, params0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(qft::bubble_series_sum(4.0, params0, 1.0), std::invalid_argument);
}

TEST_CASE("renormalized sigma covariance") {
    const HurstIndex a(0.2);
    const auto bare = qft::SigmaCovariance::bare(a, 0.1);
    CHECK(bare.mass == 0.0);
    CHECK(qft::renormalized_sigma_covariance(2.0, bare) ==
          doctest::Approx(std::pow(2.0, -0.2)));

    // alpha=0.2, lambda=0.1, K=1, M=2, rho=20, xi=1 -> 1/(1 + 0.01 * 2^4) = 1/1.16
    const auto p20 = qft::make_model_params(0.2, 0.1, 2.0, 20);
    const auto ren = qft::SigmaCovariance::renormalized(p20, 1.0);
    CHECK(ren.mass == doctest::Approx(0.01 * 16.0));
    CHECK(qft::renormalized_sigma_covariance(1.0, ren) == doctest::Approx(1.0 / 1.16));

    // screening: renormalized <= bare, equality iff mass = 0; -> 0 as mass grows
    for (double xi : {0.5, 1.0, 7.0}) {
        CHECK(qft::renormalized_sigma_covariance(xi, ren) <
              qft::renormalized_sigma_covariance(xi, bare));
    }
    qft::SigmaCovariance huge = ren;
    huge.mass = 1e12;
    CHECK(qft::renormalized_sigma_covariance(1.0, huge) < 1e-11);
}

TEST_CASE("schwinger-dyson identity") {
    const auto params = qft::make_model_params(0.2, 0.1, 2.0, 12);
    // bare spectrum: free-theory consistency, bracket vanishes
    const double bare_val = std::pow(3.0, -(1.0 - 4.0 * 0.2));
    CHECK(qft::schwinger_dyson_area_spectrum(bare_val, 3.0, params) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // linearity in the bracket
    const double p = std::pow(2.0, 0.2);
    const double s1 = 0.3 / p, s2 = 0.65 / p;  // brackets 0.7 and 0.35
    const double v1 = qft::schwinger_dyson_area_spectrum(s1, 2.0, params);
    const double v2 = qft::schwinger_dyson_area_spectrum(s2, 2.0, params);
    CHECK(v1 == doctest::Approx(2.0 * v2).epsilon(1e-12));

    // SD route equals the bubble-series closed form, exactly
    const double K = 1.0;
    for (double xi : {0.5, 1.0, 3.0}) {
        const auto ren = qft::SigmaCovariance::renormalized(params, K);
        const double via_sd = qft::schwinger_dyson_area_spectrum(
            qft::renormalized_sigma_covariance(xi, ren), xi, params);
        CHECK(via_sd == doctest::Approx(qft::bubble_series_sum(xi, params, K)).epsilon(1e-13));
    }
}

TEST_CASE("mixed area spectrum") {
    const double Kpp = 0.5;
    // rho = 0, xi = 1: -lambda^{-2} / (1 + K'' lambda^2)
    const auto p0 = qft::make_model_params(0.2, 0.1, 2.0, 0);
    CHECK(qft::mixed_area_spectrum(1.0, p0, Kpp) ==
          doctest::Approx(-100.0 / (1.0 + 0.5 * 0.01)));

    double prev_abs = 1e300;
    for (int rho : {0, 4, 8, 16, 32, 64, 128}) {
        const auto p = qft::make_model_params(0.2, 0.1, 2.0, rho);
        const double v = qft::mixed_area_spectrum(1.0, p, Kpp);
        CHECK(v < 0.0);
        CHECK(std::abs(v) < prev_abs);
        prev_abs = std::abs(v);
    }
    CHECK(prev_abs < 1e-1);  // vanishes in the rho -> infinity limit

    CHECK(qft::validate_mixed_constant(5.0, 0.5) == std::nullopt);
    CHECK(qft::validate_mixed_constant(5.0, 6.0).has_value());
}

TEST_CASE("interacting area increment variance") {
    qft::BoundaryMcOptions mc;
    mc.xi_max = 128.0;
    mc.n_modes = 1024;
    mc.replicates = 300;
    const auto params = qft::make_model_params(0.2, 0.1, 2.0, 10);

    // K1 via quadrature vs Gamma closed form
    const auto v1 = qft::interacting_area_increment_variance(0.3, 1.3, params, mc);
    CHECK(v1.K1 ==
          doctest::Approx(2.0 * oracle::one_minus_cos_moment_closed(0.8)).epsilon(1e-8));
    CHECK(v1.total == doctest::Approx(v1.quadrature_part + v1.boundary_part));
    CHECK(v1.boundary_part > 0.0);

    // |t-s|^{4a} scaling of the quadrature part is exact
    const auto v2 = qft::interacting_area_increment_variance(0.3, 0.8, params, mc);
    CHECK(v1.quadrature_part / v2.quadrature_part ==
          doctest::Approx(std::pow(2.0, 0.8)).epsilon(1e-12));

    // lambda -> infinity: only the boundary term remains
    const auto big = qft::make_model_params(0.2, 1e6, 2.0, 10);
    const auto v3 = qft::interacting_area_increment_variance(0.3, 1.3, big, mc);
    CHECK(v3.quadrature_part < 1e-9 * v3.total);
    CHECK(v3.boundary_part == doctest::Approx(v1.boundary_part));

    CHECK_THROWS_AS(qft::interacting_area_increment_variance(1.0, 0.5, params, mc),
                    std::invalid_argument);
}
