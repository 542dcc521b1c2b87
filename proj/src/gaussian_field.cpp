#include "roughlab/gaussian_field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "roughlab/quadrature.hpp"
#include "roughlab/rng.hpp"

namespace roughlab::gauss {

namespace {

constexpr std::uint64_t kTailFreqStream = 0x7461696cull;  // distinct stream id

// Smooth step built from the exp(-1/x) mollifier: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double e0 = std::exp(-1.0 / x);
    const double e1 = std::exp(-1.0 / (1.0 - x));
    return e0 / (e0 + e1);
}

std::complex<double> increment_kernel(double t, double xi, double weight) {
    // (e^{i t xi} - 1) / (i xi) * weight
    const double th = t * xi;
    return {std::sin(th) / xi * weight, (1.0 - std::cos(th)) / xi * weight};
}

}  // namespace

HurstIndex::HurstIndex(double a) : alpha(a) {
    if (!(a > 0.0 && a < 1.0))
        throw std::invalid_argument("HurstIndex: alpha must lie in (0,1)");
}

FrequencyGrid::FrequencyGrid(double xi_max_, int n_modes_)
    : xi_max(xi_max_), n_modes(n_modes_), spacing(xi_max_ / n_modes_) {
    if (!(xi_max_ > 0.0)) throw std::invalid_argument("FrequencyGrid: xi_max must be > 0");
    if (n_modes_ < 1) throw std::invalid_argument("FrequencyGrid: n_modes must be >= 1");
}

CutoffSpec::CutoffSpec(double M_, int rho_)
    : M(M_), rho(rho_), chi0_support(M_), chi1_support(1.0, M_ * M_) {
    if (!(M_ > 1.0)) throw std::invalid_argument("CutoffSpec: M must be > 1");
    if (rho_ < 0) throw std::invalid_argument("CutoffSpec: rho must be >= 0");
}

double CutoffSpec::chi0(double xi) const {
    return smooth_step((M - std::abs(xi)) / (M - 1.0));
}

double CutoffSpec::chi_j(int j, double xi) const {
    if (j < 0) throw std::invalid_argument("CutoffSpec::chi_j: j must be >= 0");
    if (j == 0) return chi0(xi);
    const double mj = std::pow(M, j);
    return chi0(xi / mj) - chi0(xi * M / mj);
}

double CutoffSpec::cutoff_multiplier(double xi) const {
    return chi0(xi / std::pow(M, rho));
}

double normalization_constant(HurstIndex alpha) {
    static std::map<double, double> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(alpha.alpha);
        if (it != cache.end()) return it->second;
    }
    // (2 pi c)^{-1} \int |e^{iu}-1|^2 |u|^{-1-2a} du = 1
    //  => c = (2/pi) \int_0^inf (1 - cos u) u^{-1-2a} du
    const double c = (2.0 / M_PI) * quad::one_minus_cos_moment(2.0 * alpha.alpha);
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(alpha.alpha, c);
    return c;
}

double fbm_covariance(double s, double t, HurstIndex alpha) {
    const double a2 = 2.0 * alpha.alpha;
    return 0.5 * (std::pow(std::abs(s), a2) + std::pow(std::abs(t), a2) -
                  std::pow(std::abs(t - s), a2));
}

SpectralField sample_spectral_noise(const FrequencyGrid& grid, int d,
                                    std::uint64_t seed) {
    if (d < 1) throw std::invalid_argument("sample_spectral_noise: d must be >= 1");
    SpectralField field(grid, d);
    const double sd = std::sqrt(grid.spacing);
    for (int c = 0; c < d; ++c)
        for (int k = 0; k < grid.n_modes; ++k)
            field.amp(c, k) = sd * rng::complex_gaussian(seed, c, k, 0);
    return field;
}

SpectralTail sample_spectral_tail(double xi_start, double xi_end,
                                  int modes_per_octave, int d,
                                  std::uint64_t seed, HurstIndex alpha) {
    if (!(xi_end > xi_start && xi_start > 0.0))
        throw std::invalid_argument("sample_spectral_tail: need 0 < xi_start < xi_end");
    if (modes_per_octave < 1 || d < 1)
        throw std::invalid_argument("sample_spectral_tail: bad mode/component count");

    const double p = 2.0 * alpha.alpha;  // spectral density envelope xi^{-1-p}
    const double ratio = std::pow(2.0, 1.0 / modes_per_octave);
    std::vector<double> edges{xi_start};
    while (edges.back() < xi_end) edges.push_back(std::min(edges.back() * ratio, xi_end));

    SpectralTail tail;
    tail.alpha = alpha.alpha;
    tail.components = d;
    const std::size_t n = edges.size() - 1;
    tail.freqs.resize(n);
    tail.amps.resize(static_cast<std::size_t>(d) * n);

    std::vector<double> stddev(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double a = edges[j], b = edges[j + 1];
        const double mass = (std::pow(a, -p) - std::pow(b, -p)) / p;
        // Frequency stratified within the cell: inverse CDF of xi^{-1-p}.
        const double u = rng::u01(seed, kTailFreqStream, j, 0);
        const double xi = std::pow(std::pow(a, -p) - u * p * mass, -1.0 / p);
        tail.freqs[j] = xi;
        // Amplitude variance chosen so that E |kernel(xi_j)|^2 E|A_j|^2
        // averages to the exact cell integral of the spectral density.
        stddev[j] = std::sqrt(mass) * std::pow(xi, 0.5 * (1.0 + p));
    }
    for (int c = 0; c < d; ++c)
        for (std::size_t j = 0; j < n; ++j)
            tail.amps[static_cast<std::size_t>(c) * n + j] =
                stddev[j] * rng::complex_gaussian(seed, c, j, 1);
    return tail;
}

namespace {

SamplePath fbm_impl(const SpectralField& noise, const SpectralTail* tail,
                    const std::vector<double>& times, HurstIndex alpha) {
    if (times.empty()) throw std::invalid_argument("fbm_from_spectrum: empty time grid");
    if (tail && tail->components != noise.components)
        throw std::invalid_argument("fbm_from_spectrum: tail component mismatch");

    const int d = noise.components;
    const double ca = normalization_constant(alpha);
    const double norm = 1.0 / std::sqrt(2.0 * M_PI * ca);
    const double half_minus_a = 0.5 - alpha.alpha;

    const int n = noise.grid.n_modes;
    std::vector<double> weight(n);
    for (int k = 0; k < n; ++k)
        weight[k] = std::pow(noise.grid.mode(k), half_minus_a);
    std::vector<double> tail_weight;
    if (tail) {
        tail_weight.resize(tail->freqs.size());
        for (std::size_t j = 0; j < tail->freqs.size(); ++j)
            tail_weight[j] = std::pow(tail->freqs[j], half_minus_a);
    }

    std::vector<double> vals(times.size() * d, 0.0);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t == 0.0) continue;  // B_0 = 0 exactly
        for (int c = 0; c < d; ++c) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) {
                const std::complex<double> kr =
                    increment_kernel(t, noise.grid.mode(k), weight[k]);
                const std::complex<double> a = noise.amp(c, k);
                // positive mode + conjugate mirror: 2 Re(kernel * amp)
                acc += 2.0 * (kr.real() * a.real() - kr.imag() * a.imag());
            }
            if (tail) {
                for (std::size_t j = 0; j < tail->freqs.size(); ++j) {
                    const std::complex<double> kr =
                        increment_kernel(t, tail->freqs[j], tail_weight[j]);
                    const std::complex<double> a = tail->amp(c, j);
                    acc += 2.0 * (kr.real() * a.real() - kr.imag() * a.imag());
                }
            }
            vals[i * d + c] = norm * acc;
        }
    }
    return SamplePath(times, std::move(vals), d, alpha.alpha, 0);
}

}  // namespace

SamplePath fbm_from_spectrum(const SpectralField& noise,
                             const std::vector<double>& times, HurstIndex alpha) {
    return fbm_impl(noise, nullptr, times, alpha);
}

SamplePath fbm_from_spectrum(const SpectralField& noise, const SpectralTail& tail,
                             const std::vector<double>& times, HurstIndex alpha) {
    return fbm_impl(noise, &tail, times, alpha);
}

std::vector<SpectralField> decompose_scales(const SpectralField& noise,
                                            const CutoffSpec& cutoff) {
    const double top = std::pow(cutoff.M, cutoff.rho);
    if (noise.grid.xi_max < top)
        throw std::invalid_argument("decompose_scales: grid.xi_max < M^rho");
    if (cutoff.rho >= 1) {
        bool resolved = false;
        for (int k = 0; k < noise.grid.n_modes && !resolved; ++k) {
            const double xi = noise.grid.mode(k);
            resolved = xi > cutoff.chi1_support.first && xi < cutoff.chi1_support.second;
        }
        if (!resolved)
            throw std::invalid_argument("decompose_scales: grid too coarse to resolve slice j=1");
    }

    std::vector<SpectralField> slices;
    slices.reserve(cutoff.rho + 1);
    for (int j = 0; j <= cutoff.rho; ++j) {
        SpectralField slice(noise.grid, noise.components);
        for (int c = 0; c < noise.components; ++c)
            for (int k = 0; k < noise.grid.n_modes; ++k)
                slice.amp(c, k) = noise.amp(c, k) * cutoff.chi_j(j, noise.grid.mode(k));
        slices.push_back(std::move(slice));
    }
    return slices;
}

namespace {

double wick_rec(const std::vector<std::vector<double>>& cov, std::vector<int>& idx) {
    if (idx.empty()) return 1.0;
    const int first = idx[0];
    double total = 0.0;
    for (std::size_t m = 1; m < idx.size(); ++m) {
        const int partner = idx[m];
        std::vector<int> rest;
        rest.reserve(idx.size() - 2);
        for (std::size_t r = 1; r < idx.size(); ++r)
            if (r != m) rest.push_back(idx[r]);
        total += cov[first][partner] * wick_rec(cov, rest);
    }
    return total;
}

}  // namespace

double wick_moment(const std::vector<std::vector<double>>& cov,
                   const std::vector<int>& indices) {
    if (indices.size() % 2 != 0)
        throw std::invalid_argument("wick_moment: odd index count (odd moments vanish; "
                                    "ask for an even number of indices)");
    if (indices.size() > 12)
        throw std::invalid_argument("wick_moment: more than 12 indices");
    const int dim = static_cast<int>(cov.size());
    for (const auto& row : cov)
        if (static_cast<int>(row.size()) != dim)
            throw std::invalid_argument("wick_moment: covariance must be square");
    for (int i : indices)
        if (i < 0 || i >= dim)
            throw std::invalid_argument("wick_moment: index out of range");
    std::vector<int> idx(indices);
    return wick_rec(cov, idx);
}

}  // namespace roughlab::gauss
