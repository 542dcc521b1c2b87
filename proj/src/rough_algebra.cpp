#include "roughlab/rough_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace roughlab::algebra {

namespace {

std::size_t ipow(int base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
    return r;
}

void check_compatible(const TruncatedSignature& a, const TruncatedSignature& b) {
    if (a.d != b.d || a.depth != b.depth)
        throw std::invalid_argument("tensor shape mismatch (d or depth differ)");
}

// Enumerate words of a given level by their dense index.
void next_word(Word& w, int d) {
    for (int pos = static_cast<int>(w.size()) - 1; pos >= 0; --pos) {
        if (++w[pos] < d) return;
        w[pos] = 0;
    }
}

}  // namespace

TruncatedSignature::TruncatedSignature(int d_, int depth_) : d(d_), depth(depth_) {
    if (d_ < 1) throw std::invalid_argument("TruncatedSignature: d must be >= 1");
    if (depth_ < 1) throw std::invalid_argument("TruncatedSignature: depth must be >= 1");
    levels.resize(depth_ + 1);
    for (int n = 0; n <= depth_; ++n) levels[n].assign(ipow(d_, n), 0.0);
}

TruncatedSignature TruncatedSignature::identity(int d, int depth) {
    TruncatedSignature s(d, depth);
    s.levels[0][0] = 1.0;
    return s;
}

std::size_t TruncatedSignature::word_index(const Word& w) const {
    std::size_t idx = 0;
    for (int letter : w) {
        if (letter < 0 || letter >= d)
            throw std::invalid_argument("word letter out of range");
        idx = idx * d + static_cast<std::size_t>(letter);
    }
    return idx;
}

double TruncatedSignature::coeff(const Word& w) const {
    const int n = static_cast<int>(w.size());
    if (n > depth) throw std::invalid_argument("word longer than depth");
    return levels[n][word_index(w)];
}

double& TruncatedSignature::coeff(const Word& w) {
    const int n = static_cast<int>(w.size());
    if (n > depth) throw std::invalid_argument("word longer than depth");
    return levels[n][word_index(w)];
}

TruncatedSignature chen_product(const TruncatedSignature& a, const TruncatedSignature& b) {
    check_compatible(a, b);
    const int d = a.d, N = a.depth;
    TruncatedSignature out(d, N);
    for (int n = 0; n <= N; ++n) {
        auto& lvl = out.levels[n];
        for (int n1 = 0; n1 <= n; ++n1) {
            const int n2 = n - n1;
            const auto& A = a.levels[n1];
            const auto& B = b.levels[n2];
            const std::size_t szB = B.size();
            for (std::size_t ia = 0; ia < A.size(); ++ia) {
                if (A[ia] == 0.0) continue;
                const std::size_t base = ia * szB;
                for (std::size_t ib = 0; ib < szB; ++ib) lvl[base + ib] += A[ia] * B[ib];
            }
        }
    }
    return out;
}

TruncatedSignature segment_exponential(const std::vector<double>& increment, int depth) {
    const int d = static_cast<int>(increment.size());
    if (d < 1) throw std::invalid_argument("segment_exponential: empty increment");
    TruncatedSignature s = TruncatedSignature::identity(d, depth);
    // level n = V^{(x)n} / n!; built from level n-1 = V^{(x)(n-1)} / (n-1)!
    for (int n = 1; n <= depth; ++n) {
        auto& lvl = s.levels[n];
        const auto& prev = s.levels[n - 1];
        for (std::size_t ip = 0; ip < prev.size(); ++ip)
            for (int j = 0; j < d; ++j)
                lvl[ip * d + j] = prev[ip] * increment[j] / n;
    }
    return s;
}

TruncatedSignature signature(const SamplePath& path, int depth) {
    if (depth < 1) throw std::invalid_argument("signature: depth must be >= 1");
    if (depth > 6) throw std::invalid_argument("signature: depth capped at 6");
    if (path.size() < 2) throw std::invalid_argument("signature: need at least 2 samples");
    const int d = path.dimension();
    TruncatedSignature acc = TruncatedSignature::identity(d, depth);
    std::vector<double> inc(d);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        for (int c = 0; c < d; ++c) inc[c] = path.value(i + 1, c) - path.value(i, c);
        acc = chen_product(acc, segment_exponential(inc, depth));
    }
    return acc;
}

namespace {

std::vector<double> interpolate(const SamplePath& path, double t) {
    const auto& ts = path.times;
    if (t < ts.front() - 1e-12 || t > ts.back() + 1e-12)
        throw std::invalid_argument("signature: time outside path range");
    const int d = path.dimension();
    std::vector<double> v(d);
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    if (it == ts.begin()) {
        for (int c = 0; c < d; ++c) v[c] = path.value(0, c);
        return v;
    }
    if (it == ts.end()) {
        for (int c = 0; c < d; ++c) v[c] = path.value(path.size() - 1, c);
        return v;
    }
    const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
    for (int c = 0; c < d; ++c)
        v[c] = (1.0 - w) * path.value(lo, c) + w * path.value(hi, c);
    return v;
}

}  // namespace

TruncatedSignature signature(const SamplePath& path, double s, double t, int depth) {
    if (!(s < t)) throw std::invalid_argument("signature: need s < t");
    const int d = path.dimension();
    std::vector<double> prev = interpolate(path, s);
    TruncatedSignature acc = TruncatedSignature::identity(d, depth);
    std::vector<double> inc(d);
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (path.times[i] <= s || path.times[i] >= t) continue;
        for (int c = 0; c < d; ++c) inc[c] = path.value(i, c) - prev[c];
        acc = chen_product(acc, segment_exponential(inc, depth));
        for (int c = 0; c < d; ++c) prev[c] = path.value(i, c);
    }
    std::vector<double> last = interpolate(path, t);
    for (int c = 0; c < d; ++c) inc[c] = last[c] - prev[c];
    acc = chen_product(acc, segment_exponential(inc, depth));
    return acc;
}

std::vector<Word> shuffle_words(const Word& i, const Word& j) {
    if (i.size() + j.size() > 12)
        throw std::invalid_argument("shuffle_words: combined length capped at 12");
    std::vector<Word> out;
    Word current;
    current.reserve(i.size() + j.size());
    // interleave preserving internal order
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t a, std::size_t b) {
        if (a == i.size() && b == j.size()) {
            out.push_back(current);
            return;
        }
        if (a < i.size()) {
            current.push_back(i[a]);
            rec(a + 1, b);
            current.pop_back();
        }
        if (b < j.size()) {
            current.push_back(j[b]);
            rec(a, b + 1);
            current.pop_back();
        }
    };
    rec(0, 0);
    return out;
}

double check_shuffle(const TruncatedSignature& sig) {
    if (sig.depth < 2) throw std::invalid_argument("check_shuffle: depth must be >= 2");
    const int d = sig.d;
    double worst = 0.0;
    for (int n1 = 1; n1 <= sig.depth - 1; ++n1) {
        for (int n2 = n1; n1 + n2 <= sig.depth; ++n2) {
            Word wi(n1, 0);
            const std::size_t counti = ipow(d, n1);
            for (std::size_t a = 0; a < counti; ++a) {
                Word wj(n2, 0);
                const std::size_t countj = ipow(d, n2);
                for (std::size_t b = 0; b < countj; ++b) {
                    double rhs = 0.0;
                    for (const Word& k : shuffle_words(wi, wj)) rhs += sig.coeff(k);
                    const double lhs = sig.coeff(wi) * sig.coeff(wj);
                    worst = std::max(worst, std::abs(lhs - rhs));
                    next_word(wj, d);
                }
                next_word(wi, d);
            }
        }
    }
    return worst;
}

TruncatedSignature log_signature(const TruncatedSignature& sig) {
    if (std::abs(sig.levels[0][0] - 1.0) > 1e-12)
        throw std::invalid_argument("log_signature: level 0 must equal 1 (grouplike)");
    const int N = sig.depth;
    TruncatedSignature x = sig;
    x.levels[0][0] = 0.0;  // x = sig - 1, nilpotent
    TruncatedSignature out(sig.d, N);
    TruncatedSignature power = x;
    double sign = 1.0;
    for (int k = 1; k <= N; ++k) {
        for (int n = 0; n <= N; ++n)
            for (std::size_t m = 0; m < out.levels[n].size(); ++m)
                out.levels[n][m] += sign * power.levels[n][m] / k;
        if (k < N) power = chen_product(power, x);
        sign = -sign;
    }
    return out;
}

TruncatedSignature exp_tensor(const TruncatedSignature& lie) {
    if (lie.levels[0][0] != 0.0)
        throw std::invalid_argument("exp_tensor: level 0 must be 0");
    const int N = lie.depth;
    TruncatedSignature out = TruncatedSignature::identity(lie.d, N);
    TruncatedSignature power = TruncatedSignature::identity(lie.d, N);
    double factorial = 1.0;
    for (int k = 1; k <= N; ++k) {
        power = chen_product(power, lie);
        factorial *= k;
        for (int n = 0; n <= N; ++n)
            for (std::size_t m = 0; m < out.levels[n].size(); ++m)
                out.levels[n][m] += power.levels[n][m] / factorial;
    }
    return out;
}

HeisenbergElement heisenberg_product(const HeisenbergElement& g1,
                                     const HeisenbergElement& g2) {
    return {g1.x + g2.x, g1.y + g2.y,
            g1.z + g2.z + 0.5 * (g1.x * g2.y - g2.x * g1.y)};
}

HeisenbergElement heisenberg_inverse(const HeisenbergElement& g) {
    return {-g.x, -g.y, -g.z};
}

HeisenbergElement to_heisenberg(const TruncatedSignature& sig) {
    if (sig.d != 2 || sig.depth < 2)
        throw std::invalid_argument("to_heisenberg: need d = 2, depth >= 2");
    HeisenbergElement g;
    g.x = sig.levels[1][0];
    g.y = sig.levels[1][1];
    g.z = 0.5 * (sig.levels[2][1] - sig.levels[2][2]);  // (0,1) minus (1,0)
    return g;
}

RoughPathReport validate_rough_path(const RoughFunctional& functional, double alpha,
                                    const std::vector<double>& sample_times, int d) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("validate_rough_path: alpha must lie in (0,1)");
    if (sample_times.size() < 3)
        throw std::invalid_argument("validate_rough_path: need at least 3 sample times");
    const int N = std::min(static_cast<int>(std::floor(1.0 / alpha)), 6);

    auto build = [&](double s, double t) {
        TruncatedSignature sig = TruncatedSignature::identity(d, N);
        for (int n = 1; n <= sig.depth; ++n) {
            Word w(n, 0);
            for (std::size_t m = 0; m < sig.levels[n].size(); ++m) {
                sig.levels[n][m] = functional(s, t, w);
                next_word(w, d);
            }
        }
        return sig;
    };

    RoughPathReport report;
    report.depth = N;
    report.holder_ratios.assign(N + 1, 0.0);

    // Keep the triple loop tractable on long grids.
    std::vector<double> ts = sample_times;
    if (ts.size() > 16) {
        std::vector<double> sub;
        const std::size_t stride = ts.size() / 16;
        for (std::size_t i = 0; i < ts.size(); i += stride) sub.push_back(ts[i]);
        if (sub.back() != ts.back()) sub.push_back(ts.back());
        ts = std::move(sub);
    }

    for (std::size_t a = 0; a < ts.size(); ++a) {
        for (std::size_t c = a + 1; c < ts.size(); ++c) {
            const TruncatedSignature sig = build(ts[a], ts[c]);
            if (N >= 2)
                report.max_shuffle_violation =
                    std::max(report.max_shuffle_violation, check_shuffle(sig));
            const double dt = ts[c] - ts[a];
            for (int n = 1; n <= N; ++n) {
                double mx = 0.0;
                for (double v : sig.levels[n]) mx = std::max(mx, std::abs(v));
                report.holder_ratios[n] =
                    std::max(report.holder_ratios[n], mx / std::pow(dt, n * alpha));
            }
            for (std::size_t b = a + 1; b < c; ++b) {
                const TruncatedSignature left = build(ts[a], ts[b]);
                const TruncatedSignature right = build(ts[b], ts[c]);
                const TruncatedSignature prod = chen_product(left, right);
                double viol = 0.0;
                for (int n = 1; n <= prod.depth; ++n)
                    for (std::size_t m = 0; m < prod.levels[n].size(); ++m)
                        viol = std::max(viol,
                                        std::abs(prod.levels[n][m] - sig.levels[n][m]));
                report.max_chen_violation = std::max(report.max_chen_violation, viol);
            }
        }
    }
    return report;
}

}  // namespace roughlab::algebra
