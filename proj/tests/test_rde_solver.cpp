#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "roughlab/rde_solver.hpp"

using namespace roughlab;
using rde::Driver;
using rde::State;
using rde::VectorFieldSystem;

namespace {

// so(3) generators
const std::vector<double> L1{0, 0, 0, 0, 0, -1, 0, 1, 0};
const std::vector<double> L2{0, 0, 1, 0, 0, 0, -1, 0, 0};
const std::vector<double> L3{0, -1, 0, 1, 0, 0, 0, 0, 0};

double err_norm(const State& a, const State& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = a + (b - a) * i / n;
    return v;
}

}  // namespace

TEST_CASE("taylor composites: constants, linear fields, scalar quadratic") {
    // constant fields: all higher composites vanish
    VectorFieldSystem consts(2, 2,
                             {[](const State&) { return State{1.0, 0.0}; },
                              [](const State&) { return State{0.0, 1.0}; }});
    const State y{0.3, -0.8};
    CHECK(err_norm(rde::taylor_composite(consts, {0, 1}, y), {0, 0}) < 1e-9);
    CHECK(err_norm(rde::taylor_composite(consts, {1, 0, 1}, y), {0, 0}) < 1e-9);

    // linear fields: word (i1, i2) gives A_{i2} A_{i1} y
    const std::vector<double> A1{0.2, 0.7, -0.3, 0.4};
    const std::vector<double> A2{-0.5, 0.1, 0.6, 0.2};
    const auto linear = VectorFieldSystem::linear({A1, A2}, 2);
    auto matvec = [](const std::vector<double>& m, const State& v) {
        return State{m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
    };
    const State expect = matvec(A2, matvec(A1, y));
    CHECK(err_norm(rde::taylor_composite(linear, {0, 1}, y), expect) < 1e-10);

    // scalar state, V(y) = y: (y d/dy)^2 Id = y
    VectorFieldSystem scalar(1, 1, {[](const State& v) { return State{v[0]}; }});
    const State z{1.7};
    CHECK(rde::taylor_composite(scalar, {0, 0}, z)[0] == doctest::Approx(1.7).epsilon(1e-6));

    CHECK_THROWS_AS(rde::taylor_composite(scalar, {3}, z), std::invalid_argument);
}

TEST_CASE("euler step basics") {
    const auto linear = VectorFieldSystem::linear(
        {{0.2, 0.0, 0.0, 0.1}, {0.0, -0.3, 0.4, 0.0}}, 2);
    const State y{1.0, 2.0};

    // zero increment: unchanged
    const auto zero = algebra::TruncatedSignature::identity(2, 2);
    CHECK(err_norm(rde::euler_step(linear, zero, y, 2), y) == 0.0);

    // rank 1 on a straight segment: classical explicit Euler
    const auto seg = algebra::segment_exponential({0.05, -0.02}, 2);
    const auto got = rde::euler_step(linear, seg, y, 1);
    State expect = y;
    const State v1 = linear.fields[0](y);
    const State v2 = linear.fields[1](y);
    for (int i = 0; i < 2; ++i) expect[i] += 0.05 * v1[i] - 0.02 * v2[i];
    CHECK(err_norm(got, expect) < 1e-14);

    CHECK_THROWS_AS(rde::euler_step(linear, seg, y, 0), std::invalid_argument);
    CHECK_THROWS_AS(rde::euler_step(linear, seg, y, 3), std::invalid_argument);
}

TEST_CASE("rank-2 step on a straight segment matches the exponential Taylor") {
    // commuting pair: A2 = 0.5 A1 + 0.1 I
    const std::vector<double> A1{0.2, 0.05, 0.05, 0.2};
    const std::vector<double> A2{0.2, 0.025, 0.025, 0.2};
    const auto vfs = VectorFieldSystem::linear({A1, A2}, 2);
    const State y{1.0, -1.0};
    const double d1 = 0.3, d2 = -0.2;
    const auto seg = algebra::segment_exponential({d1, d2}, 2);
    const auto got = rde::euler_step(vfs, seg, y, 2);

    // I + X + X^2/2 with X = d1 A1 + d2 A2
    std::vector<double> X(4);
    for (int i = 0; i < 4; ++i) X[i] = d1 * A1[i] + d2 * A2[i];
    std::vector<double> X2{X[0] * X[0] + X[1] * X[2], X[0] * X[1] + X[1] * X[3],
                           X[2] * X[0] + X[3] * X[2], X[2] * X[1] + X[3] * X[3]};
    State expect{y[0] + X[0] * y[0] + X[1] * y[1] + 0.5 * (X2[0] * y[0] + X2[1] * y[1]),
                 y[1] + X[2] * y[0] + X[3] * y[1] + 0.5 * (X2[2] * y[0] + X2[3] * y[1])};
    CHECK(err_norm(got, expect) < 1e-12);
}

TEST_CASE("smooth rotation benchmark: empirical order tracks the rank") {
    // dy = L1 y dt + L2 y d(sin t) on [0, 2]; reference by classical RK4 on
    // the flattened ODE y' = L1 y + cos(t) L2 y.
    const auto vfs = VectorFieldSystem::linear({L1, L2}, 3);
    const State y0{1.0, 0.0, 0.0};
    const auto reference = oracle::rk4(
        [](double t, const std::vector<double>& y) {
            std::vector<double> dy(3, 0.0);
            const double c = std::cos(t);
            // L1 y + cos t L2 y
            dy[0] = c * y[2];
            dy[1] = -y[2];
            dy[2] = y[1] - c * y[0];
            return dy;
        },
        y0, 0.0, 2.0, 200000);

    const Driver driver = Driver::from_smooth(
        [](double t) { return std::vector<double>{1.0, std::cos(t)}; }, 2, 64);

    for (int rank = 1; rank <= 3; ++rank) {
        std::vector<std::pair<double, double>> err_by_h;
        for (int n : {8, 16, 32, 64, 128}) {
            const auto traj = rde::solve(vfs, driver, linspace(0.0, 2.0, n), y0, rank);
            const double err = err_norm(traj.back(), reference);
            err_by_h.emplace_back(2.0 / n, err);
        }
        // log-log slope of error vs step size
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [h, e] : err_by_h) {
            const double lx = std::log(h), ly = std::log(e);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const int m = static_cast<int>(err_by_h.size());
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        CHECK(slope > rank - 0.2);
        CHECK(slope < rank + 0.6);
    }
}

TEST_CASE("zero vector fields give a constant trajectory") {
    VectorFieldSystem vfs(2, 2,
                          {[](const State&) { return State{0.0, 0.0}; },
                           [](const State&) { return State{0.0, 0.0}; }});
    const Driver driver = Driver::from_smooth(
        [](double t) { return std::vector<double>{1.0, std::cos(t)}; }, 2, 16);
    const auto traj = rde::solve(vfs, driver, linspace(0.0, 1.0, 16), {0.5, -2.0}, 2);
    for (const auto& y : traj) {
        CHECK(y[0] == 0.5);
        CHECK(y[1] == -2.0);
    }
}

TEST_CASE("pure-area driver advances by the commutator flow") {
    // G1 = 0, G2(0,1) = -G2(1,0) = a per step: each rank-2 step multiplies by
    // (I - a [A1, A2]); as a -> 0 with n a fixed this converges to the exact
    // commutator flow exp(-T [L1, L2]) = exp(-T L3).
    const auto vfs = VectorFieldSystem::linear({L1, L2}, 3);
    const State y0{0.0, 1.0, 0.0};
    const double T = 0.5;
    std::vector<double> mL3(9);
    for (int i = 0; i < 9; ++i) mL3[i] = -T * L3[i];
    const auto target_mat = oracle::expm(mL3, 3);
    State target(3, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) target[i] += target_mat[i * 3 + j] * y0[j];

    double prev_err = -1.0;
    double final_err = 0.0;
    for (int n : {10, 20, 40, 80}) {
        const double a = T / n;
        const Driver driver = Driver::from_functional(
            [a](double, double, const algebra::Word& w) {
                if (w == algebra::Word{0, 1}) return a;
                if (w == algebra::Word{1, 0}) return -a;
                return 0.0;
            },
            2, 2);
        const auto traj = rde::solve(vfs, driver, linspace(0.0, T, n), y0, 2);
        const double err = err_norm(traj.back(), target);
        if (prev_err > 0.0) CHECK(err < 0.7 * prev_err);
        prev_err = err;
        final_err = err;
    }
    CHECK(final_err < 5e-3);
}

TEST_CASE("commuting linear system matches the closed form to 1e-8") {
    const std::vector<double> A1{0.1, 0.025, 0.025, 0.1};
    const std::vector<double> A2{0.1, 0.0125, 0.0125, 0.1};  // 0.5 A1 + 0.05 I
    const auto vfs = VectorFieldSystem::linear({A1, A2}, 2);
    const State y0{1.0, 0.5};
    const Driver driver = Driver::from_smooth(
        [](double t) { return std::vector<double>{1.0, std::cos(t)}; }, 2, 64);

    // closed form: exp(A1 t + A2 sin t) y0 at t = 1
    std::vector<double> E(4);
    const double s1 = 1.0, s2 = std::sin(1.0);
    for (int i = 0; i < 4; ++i) E[i] = A1[i] * s1 + A2[i] * s2;
    const auto expE = oracle::expm(E, 2);
    State closed(2, 0.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) closed[i] += expE[i * 2 + j] * y0[j];

    const auto traj = rde::solve(vfs, driver, linspace(0.0, 1.0, 1 << 10), y0, 2);
    CHECK(err_norm(traj.back(), closed) < 1e-8);
}

TEST_CASE("solve aborts on non-finite states naming the interval") {
    VectorFieldSystem vfs(1, 1, {[](const State& y) { return State{1e8 * y[0] * y[0]}; }});
    const Driver driver = Driver::from_smooth(
        [](double) { return std::vector<double>{1.0}; }, 1, 4);
    CHECK_THROWS_WITH_AS(
        rde::solve(vfs, driver, linspace(0.0, 8.0, 8), {10.0}, 1),
        doctest::Contains("interval"), std::runtime_error);
    CHECK_THROWS_AS(rde::solve(vfs, driver, {0.0}, {1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(rde::solve(vfs, driver, {0.0, 1.0, 0.5}, {1.0}, 1),
                    std::invalid_argument);
}

TEST_CASE("path-backed driver reproduces the ODE driven by the same path") {
    // Sample (t, sin t) densely, drive the rank-2 scheme with signatures of
    // the piecewise-linear path, and compare against RK4 on the smooth ODE.
    const auto vfs = VectorFieldSystem::linear({L1, L2}, 3);
    const State y0{1.0, 0.0, 0.0};
    const int n_samples = 2048;
    std::vector<double> ts(n_samples + 1), vals(2 * (n_samples + 1));
    for (int i = 0; i <= n_samples; ++i) {
        const double t = 2.0 * i / n_samples;
        ts[i] = t;
        vals[2 * i] = t;
        vals[2 * i + 1] = std::sin(t);
    }
    const Driver driver = Driver::from_path(SamplePath(ts, vals, 2));

    const auto reference = oracle::rk4(
        [](double t, const std::vector<double>& y) {
            const double c = std::cos(t);
            return std::vector<double>{c * y[2], -y[2], y[1] - c * y[0]};
        },
        y0, 0.0, 2.0, 100000);

    const auto traj = rde::solve(vfs, driver, linspace(0.0, 2.0, 64), y0, 2);
    CHECK(err_norm(traj.back(), reference) < 2e-3);
}
