#include <doctest.h>

#include <cmath>
#include <random>

#include "roughlab/rough_algebra.hpp"

using namespace roughlab;
using algebra::HeisenbergElement;
using algebra::TruncatedSignature;
using algebra::Word;

namespace {

SamplePath make_path(const std::vector<double>& ts, const std::vector<double>& flat, int d) {
    return SamplePath(ts, flat, d);
}

SamplePath random_pl_path(std::mt19937_64& gen, int d, int segments) {
    std::normal_distribution<double> nd;
    std::vector<double> ts(segments + 1), vals((segments + 1) * d, 0.0);
    for (int i = 0; i <= segments; ++i) ts[i] = i / double(segments);
    for (int i = 1; i <= segments; ++i)
        for (int c = 0; c < d; ++c)
            vals[i * d + c] = vals[(i - 1) * d + c] + nd(gen) / segments;
    return SamplePath(ts, vals, d);
}

double max_level_diff(const TruncatedSignature& a, const TruncatedSignature& b) {
    double m = 0.0;
    for (int n = 0; n <= a.depth; ++n)
        for (std::size_t i = 0; i < a.levels[n].size(); ++i)
            m = std::max(m, std::abs(a.levels[n][i] - b.levels[n][i]));
    return m;
}

}  // namespace

TEST_CASE("single-segment signature is the tensor exponential of the increment") {
    const std::vector<double> v{0.7, -0.4, 1.1};
    const auto sig = algebra::segment_exponential(v, 4);
    CHECK(sig.levels[0][0] == 1.0);
    // level n entry (i1..in) = prod v[i] / n!
    CHECK(sig.coeff({0}) == doctest::Approx(0.7));
    CHECK(sig.coeff({1, 2}) == doctest::Approx(-0.4 * 1.1 / 2.0));
    CHECK(sig.coeff({2, 2, 2}) == doctest::Approx(1.1 * 1.1 * 1.1 / 6.0));
    CHECK(sig.coeff({0, 1, 2, 0}) == doctest::Approx(0.7 * -0.4 * 1.1 * 0.7 / 24.0));
}

TEST_CASE("constant path has the identity signature") {
    const SamplePath p = make_path({0.0, 0.5, 1.0}, {1.0, 1.0, 1.0}, 1);
    const auto sig = algebra::signature(p, 3);
    CHECK(sig.levels[0][0] == 1.0);
    for (int n = 1; n <= 3; ++n)
        for (double x : sig.levels[n]) CHECK(x == 0.0);
}

TEST_CASE("square corner level-2 tensor (hand integration + Riemann oracle)") {
    // (0,0) -> (1,0) -> (1,1): S(0,1) = 1, S(1,0) = 0, diagonals 1/2.
    const SamplePath corner = make_path({0.0, 1.0, 2.0}, {0, 0, 1, 0, 1, 1}, 2);
    const auto sig = algebra::signature(corner, 2);
    CHECK(sig.coeff({0, 0}) == doctest::Approx(0.5));
    CHECK(sig.coeff({0, 1}) == doctest::Approx(1.0));
    CHECK(sig.coeff({1, 0}) == doctest::Approx(0.0));
    CHECK(sig.coeff({1, 1}) == doctest::Approx(0.5));

    // Riemann-sum oracle on a fine refinement of the same path.
    const int n = 4000;
    std::vector<double> ts(n + 1), vals(2 * (n + 1));
    for (int i = 0; i <= n; ++i) {
        const double u = 2.0 * i / n;
        ts[i] = u;
        vals[2 * i] = std::min(u, 1.0);
        vals[2 * i + 1] = std::max(u - 1.0, 0.0);
    }
    double s01 = 0.0;  // int (x(u) - x(0)) dy(u), trapezoid
    for (int i = 0; i < n; ++i)
        s01 += 0.5 * (vals[2 * i] + vals[2 * i + 2]) * (vals[2 * i + 3] - vals[2 * i + 1]);
    CHECK(sig.coeff({0, 1}) == doctest::Approx(s01).epsilon(1e-6));
}

TEST_CASE("chen product: identity, concatenation, defect") {
    std::mt19937_64 gen(21);
    const SamplePath p = random_pl_path(gen, 2, 12);
    const auto sig = algebra::signature(p, 4);
    const auto id = TruncatedSignature::identity(2, 4);
    CHECK(max_level_diff(algebra::chen_product(sig, id), sig) == 0.0);

    // signature(s..u) (x) signature(u..t) = signature(s..t)
    const auto left = algebra::signature(p, 0.0, 0.4, 4);
    const auto right = algebra::signature(p, 0.4, 1.0, 4);
    const auto whole = algebra::signature(p, 0.0, 1.0, 4);
    CHECK(max_level_diff(algebra::chen_product(left, right), whole) < 1e-10);

    // Levy-area defect of the antisymmetric level-2 part:
    // a_st - a_su - a_ut = (G2(u)-G2(s))(G1(t)-G1(u)) - (G1(u)-G1(s))(G2(t)-G2(u))
    // with a := S(1,0) - S(0,1) (the signed-area convention of the area module).
    auto area = [](const TruncatedSignature& s) {
        return s.coeff({1, 0}) - s.coeff({0, 1});
    };
    const double defect = area(whole) - area(left) - area(right);
    auto increment = [&](double t, int c) {
        return algebra::signature(p, 0.0, t, 1).coeff({c});
    };
    const double g1u = increment(0.4, 0), g2u = increment(0.4, 1);
    const double g1t = increment(1.0, 0), g2t = increment(1.0, 1);
    const double expect = g2u * (g1t - g1u) - g1u * (g2t - g2u);
    CHECK(defect == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("shuffle word enumeration") {
    const auto sh = algebra::shuffle_words({1, 2}, {3});
    REQUIRE(sh.size() == 3);
    CHECK(sh[0] == Word{1, 2, 3});
    for (const auto& w : sh) {
        REQUIRE(w.size() == 3);
        int i1 = -1, i2 = -1;
        for (int i = 0; i < 3; ++i) {
            if (w[i] == 1) i1 = i;
            if (w[i] == 2) i2 = i;
        }
        CHECK(i1 < i2);  // internal order preserved
    }

    CHECK(algebra::shuffle_words({0, 1}, {}) == std::vector<Word>{{0, 1}});

    const auto dup = algebra::shuffle_words({0}, {0});
    REQUIRE(dup.size() == 2);  // multiplicity 2
    CHECK(dup[0] == Word{0, 0});
    CHECK(dup[1] == Word{0, 0});
}

TEST_CASE("shuffle identity holds for path signatures and fails when perturbed") {
    std::mt19937_64 gen(7);
    const SamplePath p = random_pl_path(gen, 2, 10);
    auto sig = algebra::signature(p, 4);
    CHECK(algebra::check_shuffle(sig) < 1e-10);

    // exp of a level-1 element is grouplike
    TruncatedSignature lie(2, 4);
    lie.levels[1][0] = 0.3;
    lie.levels[1][1] = -1.2;
    CHECK(algebra::check_shuffle(algebra::exp_tensor(lie)) < 1e-12);

    // perturbing one level-2 entry shows up linearly in some shuffle relation
    sig.levels[2][1] += 0.1;
    CHECK(algebra::check_shuffle(sig) >= 0.1 - 1e-9);
}

TEST_CASE("log signature: segments, loops, round trips") {
    const auto seg = algebra::segment_exponential({0.5, -0.25}, 3);
    const auto logseg = algebra::log_signature(seg);
    CHECK(logseg.coeff({0}) == doctest::Approx(0.5));
    CHECK(logseg.coeff({1}) == doctest::Approx(-0.25));
    for (int n = 2; n <= 3; ++n)
        for (double x : logseg.levels[n]) CHECK(std::abs(x) < 1e-14);

    // polygonal circle loop: level-1 ~ 0, log level-2 antisym = signed area
    const int n = 512;
    std::vector<double> ts(n + 1), vals(2 * (n + 1));
    for (int i = 0; i <= n; ++i) {
        const double th = 2.0 * M_PI * i / n;
        ts[i] = i / double(n);
        vals[2 * i] = std::cos(th);
        vals[2 * i + 1] = std::sin(th);
    }
    const SamplePath circle(ts, vals, 2);
    const auto clog = algebra::log_signature(algebra::signature(circle, 2));
    CHECK(std::abs(clog.coeff({0})) < 1e-12);
    CHECK(std::abs(clog.coeff({1})) < 1e-12);
    // signed area of the inscribed polygon, counterclockwise
    const double poly_area = 0.5 * n * std::sin(2.0 * M_PI / n);
    CHECK(clog.coeff({0, 1}) == doctest::Approx(poly_area).epsilon(1e-9));
    CHECK(clog.coeff({1, 0}) == doctest::Approx(-poly_area).epsilon(1e-9));

    // log then exp on a random grouplike element
    std::mt19937_64 gen(3);
    std::normal_distribution<double> nd;
    TruncatedSignature lie(3, 4);
    for (int lvl = 1; lvl <= 4; ++lvl)
        for (auto& x : lie.levels[lvl]) x = 0.2 * nd(gen);
    const auto g = algebra::exp_tensor(lie);
    CHECK(max_level_diff(algebra::exp_tensor(algebra::log_signature(g)), g) < 1e-10);
}

TEST_CASE("log of a genuine signature is Lie at level 2") {
    std::mt19937_64 gen(17);
    const SamplePath p = random_pl_path(gen, 2, 9);
    const auto lg = algebra::log_signature(algebra::signature(p, 2));
    CHECK(std::abs(lg.coeff({0, 1}) + lg.coeff({1, 0})) < 1e-10);
    CHECK(std::abs(lg.coeff({0, 0})) < 1e-10);
    CHECK(std::abs(lg.coeff({1, 1})) < 1e-10);
}

TEST_CASE("heisenberg group law") {
    const HeisenbergElement g{0.4, -0.7, 0.2};
    const HeisenbergElement id{};
    auto eq = [](const HeisenbergElement& a, const HeisenbergElement& b) {
        CHECK(a.x == doctest::Approx(b.x));
        CHECK(a.y == doctest::Approx(b.y));
        CHECK(a.z == doctest::Approx(b.z));
    };
    eq(algebra::heisenberg_product(g, id), g);
    eq(algebra::heisenberg_product(g, algebra::heisenberg_inverse(g)), id);

    // commutator: z differs by exactly 1
    const HeisenbergElement a{1, 0, 0}, b{0, 1, 0};
    const auto ab = algebra::heisenberg_product(a, b);
    const auto ba = algebra::heisenberg_product(b, a);
    CHECK(ab.z - ba.z == doctest::Approx(1.0));
}

TEST_CASE("heisenberg/tensor intertwining at d = N = 2") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 25; ++trial) {
        TruncatedSignature l1(2, 2), l2(2, 2);
        for (auto* l : {&l1, &l2}) {
            l->levels[1][0] = nd(gen);
            l->levels[1][1] = nd(gen);
            const double z = nd(gen);
            l->levels[2][1] = z;
            l->levels[2][2] = -z;
        }
        const auto g1 = algebra::exp_tensor(l1);
        const auto g2 = algebra::exp_tensor(l2);
        const auto prod = algebra::chen_product(g1, g2);
        const auto h = algebra::heisenberg_product(algebra::to_heisenberg(g1),
                                                   algebra::to_heisenberg(g2));
        const auto hp = algebra::to_heisenberg(prod);
        CHECK(hp.x == doctest::Approx(h.x).epsilon(1e-12));
        CHECK(hp.y == doctest::Approx(h.y).epsilon(1e-12));
        CHECK(hp.z == doctest::Approx(h.z).epsilon(1e-12));
    }
}

TEST_CASE("chen associativity on random grouplike elements") {
    std::mt19937_64 gen(9);
    std::normal_distribution<double> nd;
    auto rnd_grouplike = [&] {
        TruncatedSignature lie(2, 4);
        for (int lvl = 1; lvl <= 4; ++lvl)
            for (auto& x : lie.levels[lvl]) x = 0.5 * nd(gen);
        return algebra::exp_tensor(lie);
    };
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = rnd_grouplike(), b = rnd_grouplike(), c = rnd_grouplike();
        const auto left = algebra::chen_product(algebra::chen_product(a, b), c);
        const auto right = algebra::chen_product(a, algebra::chen_product(b, c));
        CHECK(max_level_diff(left, right) < 1e-12);
    }
}

TEST_CASE("chen reconstruction from segment exponentials") {
    std::mt19937_64 gen(31);
    std::normal_distribution<double> nd;
    const int k = 6, d = 3;
    std::vector<double> ts(k + 1), vals((k + 1) * d, 0.0);
    for (int i = 0; i <= k; ++i) ts[i] = i;
    auto acc = TruncatedSignature::identity(d, 3);
    for (int i = 1; i <= k; ++i) {
        std::vector<double> inc(d);
        for (int c = 0; c < d; ++c) {
            inc[c] = nd(gen);
            vals[i * d + c] = vals[(i - 1) * d + c] + inc[c];
        }
        acc = algebra::chen_product(acc, algebra::segment_exponential(inc, 3));
    }
    const SamplePath p(ts, vals, d);
    CHECK(max_level_diff(acc, algebra::signature(p, 3)) < 1e-10);
}

TEST_CASE("validate_rough_path on signatures and on broken functionals") {
    std::mt19937_64 gen(2);
    const SamplePath p = random_pl_path(gen, 2, 16);
    const auto functional = [&p](double s, double t, const Word& w) {
        return algebra::signature(p, s, t, static_cast<int>(w.size())).coeff(w);
    };
    std::vector<double> ts;
    for (int i = 0; i <= 8; ++i) ts.push_back(i / 8.0);
    const auto report = algebra::validate_rough_path(functional, 0.3, ts, 2);
    CHECK(report.depth == 3);
    CHECK(report.max_chen_violation < 1e-9);
    CHECK(report.max_shuffle_violation < 1e-9);
    for (int n = 1; n <= report.depth; ++n) CHECK(std::isfinite(report.holder_ratios[n]));

    // level-2 zeroed but level-1 kept: shuffle must break on a path with area
    const auto broken = [&p](double s, double t, const Word& w) {
        if (w.size() >= 2) return 0.0;
        return algebra::signature(p, s, t, 1).coeff(w);
    };
    const auto report2 = algebra::validate_rough_path(broken, 0.3, ts, 2);
    CHECK(report2.max_shuffle_violation > 1e-6);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(algebra::signature(make_path({0, 1}, {0, 1}, 1), 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(algebra::signature(make_path({0, 1}, {0, 1}, 1), 7),
                    std::invalid_argument);
    TruncatedSignature bad(2, 2);
    bad.levels[0][0] = 0.7;
    CHECK_THROWS_AS(algebra::log_signature(bad), std::invalid_argument);
    TruncatedSignature a(2, 2), b(3, 2);
    CHECK_THROWS_AS(algebra::chen_product(a, b), std::invalid_argument);
}
