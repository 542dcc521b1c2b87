#include "roughlab/rde_solver.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace roughlab::rde {

namespace {

double inf_norm(const State& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

VectorFieldSystem::VectorFieldSystem(int d_, int state_dim_, std::vector<Field> fields_)
    : d(d_), state_dim(state_dim_), fields(std::move(fields_)) {
    if (d < 1 || state_dim < 1)
        throw std::invalid_argument("VectorFieldSystem: d and state_dim must be >= 1");
    if (static_cast<int>(fields.size()) != d)
        throw std::invalid_argument("VectorFieldSystem: need one field per driving component");
}

VectorFieldSystem VectorFieldSystem::linear(
    const std::vector<std::vector<double>>& matrices, int state_dim) {
    std::vector<Field> fields;
    for (const auto& mat : matrices) {
        if (static_cast<int>(mat.size()) != state_dim * state_dim)
            throw std::invalid_argument("VectorFieldSystem::linear: matrix shape mismatch");
        fields.push_back([mat, state_dim](const State& y) {
            State out(state_dim, 0.0);
            for (int i = 0; i < state_dim; ++i)
                for (int j = 0; j < state_dim; ++j)
                    out[i] += mat[i * state_dim + j] * y[j];
            return out;
        });
    }
    return VectorFieldSystem(static_cast<int>(matrices.size()), state_dim,
                             std::move(fields));
}

State taylor_composite(const VectorFieldSystem& vfs, const algebra::Word& word,
                       const State& y) {
    if (word.empty()) return y;
    if (static_cast<int>(word.size()) > 4)
        throw std::invalid_argument("taylor_composite: words capped at length 4");
    for (int letter : word)
        if (letter < 0 || letter >= vfs.d)
            throw std::invalid_argument("taylor_composite: word letter out of 0..d-1");
    if (word.size() == 1) return vfs.fields[word[0]](y);

    // Directional derivative of the tail composite along V of the first letter.
    const State direction = vfs.fields[word[0]](y);
    const double dn = inf_norm(direction);
    if (dn == 0.0) return State(vfs.state_dim, 0.0);
    const algebra::Word tail(word.begin() + 1, word.end());
    const double h = vfs.fd_step * (1.0 + inf_norm(y)) / dn;
    State yp(y), ym(y);
    for (int i = 0; i < vfs.state_dim; ++i) {
        yp[i] += h * direction[i];
        ym[i] -= h * direction[i];
    }
    const State gp = taylor_composite(vfs, tail, yp);
    const State gm = taylor_composite(vfs, tail, ym);
    State out(vfs.state_dim);
    for (int i = 0; i < vfs.state_dim; ++i) out[i] = (gp[i] - gm[i]) / (2.0 * h);
    return out;
}

namespace {

void words_of_length(int d, int n, std::vector<algebra::Word>& out) {
    algebra::Word w(n, 0);
    const std::size_t count = [&] {
        std::size_t c = 1;
        for (int i = 0; i < n; ++i) c *= d;
        return c;
    }();
    for (std::size_t m = 0; m < count; ++m) {
        out.push_back(w);
        for (int pos = n - 1; pos >= 0; --pos) {
            if (++w[pos] < d) break;
            w[pos] = 0;
        }
    }
}

}  // namespace

State euler_step(const VectorFieldSystem& vfs,
                 const algebra::TruncatedSignature& driver_increment,
                 const State& y, int rank) {
    if (rank < 1) throw std::invalid_argument("euler_step: rank must be >= 1");
    if (rank > driver_increment.depth)
        throw std::invalid_argument("euler_step: rank exceeds driver depth");
    if (driver_increment.d != vfs.d)
        throw std::invalid_argument("euler_step: driver dimension mismatch");
    State out = y;
    for (int n = 1; n <= rank; ++n) {
        std::vector<algebra::Word> words;
        words_of_length(vfs.d, n, words);
        for (const auto& w : words) {
            const double coeff = driver_increment.coeff(w);
            if (coeff == 0.0) continue;
            const State comp = taylor_composite(vfs, w, y);
            for (int i = 0; i < vfs.state_dim; ++i) out[i] += comp[i] * coeff;
        }
    }
    return out;
}

Driver Driver::from_path(SamplePath path) {
    Driver drv;
    drv.d_ = path.dimension();
    drv.depth_ = 6;
    auto shared = std::make_shared<SamplePath>(std::move(path));
    drv.make_ = [shared](double s, double t, int depth) {
        return algebra::signature(*shared, s, t, depth);
    };
    return drv;
}

Driver Driver::from_functional(
    std::function<double(double, double, const algebra::Word&)> f, int d, int depth) {
    if (d < 1 || depth < 1)
        throw std::invalid_argument("Driver::from_functional: bad dimensions");
    Driver drv;
    drv.d_ = d;
    drv.depth_ = depth;
    drv.make_ = [f, d](double s, double t, int depth_req) {
        algebra::TruncatedSignature sig = algebra::TruncatedSignature::identity(d, depth_req);
        for (int n = 1; n <= depth_req; ++n) {
            std::vector<algebra::Word> words;
            words_of_length(d, n, words);
            for (const auto& w : words) sig.coeff(w) = f(s, t, w);
        }
        return sig;
    };
    return drv;
}

Driver Driver::from_smooth(std::function<std::vector<double>(double)> velocity,
                           int d, int substeps) {
    if (d < 1 || substeps < 1)
        throw std::invalid_argument("Driver::from_smooth: bad dimensions");
    Driver drv;
    drv.d_ = d;
    drv.depth_ = 6;
    drv.make_ = [velocity, d, substeps](double s, double t, int depth) {
        using algebra::TruncatedSignature;
        using algebra::chen_product;
        // dS(u) = S(u) (x) (sum_i v_i(u) e_i) du, S(s) = 1, integrated by RK4.
        auto rhs = [&](const TruncatedSignature& S, double u) {
            TruncatedSignature gen(d, depth);
            const std::vector<double> v = velocity(u);
            for (int i = 0; i < d; ++i) gen.levels[1][i] = v[i];
            return chen_product(S, gen);
        };
        auto axpy = [depth](TruncatedSignature& acc, double c,
                            const TruncatedSignature& x) {
            for (int n = 0; n <= depth; ++n)
                for (std::size_t m = 0; m < acc.levels[n].size(); ++m)
                    acc.levels[n][m] += c * x.levels[n][m];
        };
        TruncatedSignature S = TruncatedSignature::identity(d, depth);
        const double h = (t - s) / substeps;
        for (int k = 0; k < substeps; ++k) {
            const double u = s + k * h;
            const TruncatedSignature k1 = rhs(S, u);
            TruncatedSignature s2 = S;
            axpy(s2, 0.5 * h, k1);
            const TruncatedSignature k2 = rhs(s2, u + 0.5 * h);
            TruncatedSignature s3 = S;
            axpy(s3, 0.5 * h, k2);
            const TruncatedSignature k3 = rhs(s3, u + 0.5 * h);
            TruncatedSignature s4 = S;
            axpy(s4, h, k3);
            const TruncatedSignature k4 = rhs(s4, u + h);
            axpy(S, h / 6.0, k1);
            axpy(S, h / 3.0, k2);
            axpy(S, h / 3.0, k3);
            axpy(S, h / 6.0, k4);
        }
        return S;
    };
    return drv;
}

algebra::TruncatedSignature Driver::increment(double s, double t, int depth) const {
    if (depth > depth_)
        throw std::invalid_argument("Driver::increment: requested depth exceeds driver depth");
    return make_(s, t, depth);
}

std::vector<State> solve(const VectorFieldSystem& vfs, const Driver& driver,
                         const std::vector<double>& partition, const State& y0,
                         int rank) {
    if (partition.size() < 2)
        throw std::invalid_argument("solve: partition needs at least 2 points");
    for (std::size_t i = 1; i < partition.size(); ++i)
        if (!(partition[i] > partition[i - 1]))
            throw std::invalid_argument("solve: partition must be increasing");
    if (static_cast<int>(y0.size()) != vfs.state_dim)
        throw std::invalid_argument("solve: initial state dimension mismatch");

    std::vector<State> traj;
    traj.reserve(partition.size());
    traj.push_back(y0);
    State y = y0;
    for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
        const algebra::TruncatedSignature inc =
            driver.increment(partition[i], partition[i + 1], rank);
        y = euler_step(vfs, inc, y, rank);
        for (double v : y)
            if (!std::isfinite(v))
                throw std::runtime_error(
                    "solve: non-finite state on interval [" +
                    std::to_string(partition[i]) + ", " +
                    std::to_string(partition[i + 1]) + "]");
        traj.push_back(y);
    }
    return traj;
}

}  // namespace roughlab::rde
