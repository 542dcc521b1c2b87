#include "roughlab/area_analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace roughlab::area {

namespace {

void check_same_grid(const SpectralField& a, const SpectralField& b) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument("area: the two noises must share one grid");
}

// Per-magnitude signed-mode amplitudes of one component, premultiplied by the
// harmonizable weight |xi|^{1/2-a}.
struct WeightedModes {
    std::vector<std::complex<double>> pos, neg;
    std::vector<double> xi;
};

WeightedModes weighted(const SpectralField& f, double alpha, int component = 0) {
    const int n = f.grid.n_modes;
    WeightedModes m;
    m.pos.resize(n);
    m.neg.resize(n);
    m.xi.resize(n);
    for (int k = 0; k < n; ++k) {
        const double xi = f.grid.mode(k);
        const double w = std::pow(xi, 0.5 - alpha);
        m.xi[k] = xi;
        m.pos[k] = f.amp(component, k) * w;
        m.neg[k] = std::conj(f.amp(component, k)) * w;
    }
    return m;
}

// Table of g(m * spacing) for integer frequency sums m in [-2n, 2n].
struct SumTable {
    std::vector<std::complex<double>> values;
    int n;
    const std::complex<double>& at(int m) const { return values[m + 2 * n]; }
};

SumTable one_time_table(int n, double spacing, double t) {
    SumTable tab;
    tab.n = n;
    tab.values.assign(4 * n + 1, {0.0, 0.0});
    for (int m = -2 * n; m <= 2 * n; ++m) {
        if (m == 0) continue;  // zero-sum pairs have no one-time skeleton value
        const double sum = m * spacing;
        tab.values[m + 2 * n] =
            std::complex<double>(std::cos(t * sum), std::sin(t * sum)) /
            std::complex<double>(0.0, sum);
    }
    return tab;
}

SumTable increment_table(int n, double spacing, double s, double t) {
    SumTable tab;
    tab.n = n;
    tab.values.assign(4 * n + 1, {0.0, 0.0});
    for (int m = -2 * n; m <= 2 * n; ++m) {
        const double sum = m * spacing;
        if (m == 0) {
            tab.values[m + 2 * n] = {t - s, 0.0};  // lim (e^{itu}-e^{isu})/(iu), u->0
            continue;
        }
        const std::complex<double> et(std::cos(t * sum), std::sin(t * sum));
        const std::complex<double> es(std::cos(s * sum), std::sin(s * sum));
        tab.values[m + 2 * n] = (et - es) / std::complex<double>(0.0, sum);
    }
    return tab;
}

// Double spectral sum over one sector.  Plus sector: |xi1| <= |xi2| with the
// inner 1/(i xi2) factor; minus sector: |xi2| < |xi1| with 1/(i xi1).
// Magnitude ties belong to the plus sector; zero-sum pairs pick up whatever
// the table stores at m = 0.
std::complex<double> sector_sum(const WeightedModes& m1, const WeightedModes& m2,
                                Sector sector, const SumTable& tab) {
    const int n = static_cast<int>(m1.xi.size());
    std::complex<double> acc(0.0, 0.0);
    if (sector == Sector::plus) {
        for (int k2 = 0; k2 < n; ++k2) {
            const std::complex<double> inv(0.0, -1.0 / m2.xi[k2]);
            std::complex<double> inner_p(0.0, 0.0), inner_m(0.0, 0.0);
            for (int k1 = 0; k1 <= k2; ++k1) {
                // xi2 > 0: sums (k1+k2+1) and (k2-k1); xi2 < 0: mirrored
                inner_p += m1.pos[k1] * tab.at(k1 + k2 + 1) + m1.neg[k1] * tab.at(k2 - k1);
                inner_m += m1.pos[k1] * tab.at(k1 - k2) + m1.neg[k1] * tab.at(-(k1 + k2 + 1));
            }
            acc += m2.pos[k2] * inv * inner_p - m2.neg[k2] * inv * inner_m;
        }
    } else {
        for (int k1 = 0; k1 < n; ++k1) {
            const std::complex<double> inv(0.0, -1.0 / m1.xi[k1]);
            std::complex<double> inner_p(0.0, 0.0), inner_m(0.0, 0.0);
            for (int k2 = 0; k2 < k1; ++k2) {
                inner_p += m2.pos[k2] * tab.at(k1 + k2 + 1) + m2.neg[k2] * tab.at(k1 - k2);
                inner_m += m2.pos[k2] * tab.at(k2 - k1) + m2.neg[k2] * tab.at(-(k1 + k2 + 1));
            }
            acc += m1.pos[k1] * inv * inner_p - m1.neg[k1] * inv * inner_m;
        }
    }
    return acc;
}

double sector_increment(const SpectralField& n1, const SpectralField& n2,
                        Sector sector, double s, double t, HurstIndex alpha) {
    check_same_grid(n1, n2);
    const WeightedModes m1 = weighted(n1, alpha.alpha);
    const WeightedModes m2 = weighted(n2, alpha.alpha);
    const SumTable tab = increment_table(n1.grid.n_modes, n1.grid.spacing, s, t);
    return sector_sum(m1, m2, sector, tab).real();
}

std::complex<double> boundary_sum(const WeightedModes& m1, const WeightedModes& m2,
                                  double s, double t) {
    const int n = static_cast<int>(m1.xi.size());
    // Plus part: -(e^{i t xi1} - e^{i s xi1}) e^{i s xi2} / [(i xi1)(i xi2)]
    // over |xi1| <= |xi2|; minus part: +(e^{i t xi2} - e^{i s xi2}) e^{i t xi1}
    // over |xi2| < |xi1|.  Both factorize per mode, so magnitude-ordered
    // prefix sums give the sector-restricted totals.
    std::vector<std::complex<double>> f1(n), g2(n), q1(n), r2(n);
    for (int k = 0; k < n; ++k) {
        const double xi = m1.xi[k];
        const std::complex<double> inv_p(0.0, -1.0 / xi), inv_m(0.0, 1.0 / xi);
        const std::complex<double> e_t(std::cos(t * xi), std::sin(t * xi));
        const std::complex<double> e_s(std::cos(s * xi), std::sin(s * xi));
        // field 1 factors, both signs folded together per magnitude
        f1[k] = m1.pos[k] * (e_t - e_s) * inv_p + m1.neg[k] * (std::conj(e_t) - std::conj(e_s)) * inv_m;
        q1[k] = m1.pos[k] * e_t * inv_p + m1.neg[k] * std::conj(e_t) * inv_m;
        // field 2 factors
        g2[k] = m2.pos[k] * e_s * inv_p + m2.neg[k] * std::conj(e_s) * inv_m;
        r2[k] = m2.pos[k] * (e_t - e_s) * inv_p + m2.neg[k] * (std::conj(e_t) - std::conj(e_s)) * inv_m;
    }
    std::complex<double> acc(0.0, 0.0);
    std::complex<double> prefix_f1(0.0, 0.0);   // inclusive: |xi1| <= |xi2|
    std::complex<double> prefix_r2(0.0, 0.0);   // exclusive: |xi2| < |xi1|
    for (int k = 0; k < n; ++k) {
        prefix_f1 += f1[k];
        acc -= g2[k] * prefix_f1;
        acc += q1[k] * prefix_r2;
        prefix_r2 += r2[k];
    }
    return acc;
}

}  // namespace

std::complex<double> skeleton_area_sector_full(const SpectralField& noise1,
                                               const SpectralField& noise2,
                                               Sector sector, double t,
                                               HurstIndex alpha) {
    check_same_grid(noise1, noise2);
    const WeightedModes m1 = weighted(noise1, alpha.alpha);
    const WeightedModes m2 = weighted(noise2, alpha.alpha);
    const SumTable tab = one_time_table(noise1.grid.n_modes, noise1.grid.spacing, t);
    return sector_sum(m1, m2, sector, tab);
}

double skeleton_area_sector(const SpectralField& noise1, const SpectralField& noise2,
                            Sector sector, double t, HurstIndex alpha) {
    return skeleton_area_sector_full(noise1, noise2, sector, t, alpha).real();
}

double boundary_term(const SpectralField& noise1, const SpectralField& noise2,
                     double s, double t, HurstIndex alpha) {
    check_same_grid(noise1, noise2);
    const WeightedModes m1 = weighted(noise1, alpha.alpha);
    const WeightedModes m2 = weighted(noise2, alpha.alpha);
    return boundary_sum(m1, m2, s, t).real();
}

AreaDecomposition decompose_area(const SpectralField& noise1,
                                 const SpectralField& noise2, double s, double t,
                                 HurstIndex alpha) {
    if (!(s < t)) throw std::invalid_argument("decompose_area: need s < t");
    AreaDecomposition dec;
    dec.s = s;
    dec.t = t;
    dec.c_alpha = gauss::normalization_constant(alpha);
    dec.a_plus_increment = sector_increment(noise1, noise2, Sector::plus, s, t, alpha);
    dec.a_minus_increment = sector_increment(noise1, noise2, Sector::minus, s, t, alpha);
    dec.boundary = boundary_term(noise1, noise2, s, t, alpha);
    return dec;
}

namespace {

// Sub-grid of [s,t] with linearly interpolated endpoint values.
std::vector<std::array<double, 3>> subgrid2(const SamplePath& path, double s, double t) {
    if (!(s < t)) throw std::invalid_argument("area: need s < t");
    if (path.dimension() != 2)
        throw std::invalid_argument("area: path must have two components");
    const auto& ts = path.times;
    if (s < ts.front() - 1e-12 || t > ts.back() + 1e-12)
        throw std::invalid_argument("area: [s,t] outside path range");
    int inside = 0;
    for (double u : ts)
        if (u >= s && u <= t) ++inside;
    if (inside < 2)
        throw std::invalid_argument("area: need at least 2 samples in [s,t]");

    auto interp = [&](double u) {
        auto it = std::lower_bound(ts.begin(), ts.end(), u);
        std::size_t hi = static_cast<std::size_t>(it - ts.begin());
        if (hi == 0) hi = 1;
        if (hi >= ts.size()) hi = ts.size() - 1;
        const std::size_t lo = hi - 1;
        const double w = (u - ts[lo]) / (ts[hi] - ts[lo]);
        return std::array<double, 3>{u, (1 - w) * path.value(lo, 0) + w * path.value(hi, 0),
                                     (1 - w) * path.value(lo, 1) + w * path.value(hi, 1)};
    };

    std::vector<std::array<double, 3>> pts;
    pts.push_back(interp(s));
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (ts[i] > s && ts[i] < t)
            pts.push_back({ts[i], path.value(i, 0), path.value(i, 1)});
    pts.push_back(interp(t));
    return pts;
}

}  // namespace

double iterated_integral_discrete(const SamplePath& path, double s, double t) {
    const auto pts = subgrid2(path, s, t);
    const double y0 = pts.front()[2];
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double dx = pts[i + 1][1] - pts[i][1];
        acc += 0.5 * ((pts[i][2] - y0) + (pts[i + 1][2] - y0)) * dx;
    }
    return acc;
}

double levy_area_discrete(const SamplePath& path, double s, double t) {
    const auto pts = subgrid2(path, s, t);
    const double x0 = pts.front()[1];
    const double y0 = pts.front()[2];
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double dx = pts[i + 1][1] - pts[i][1];
        const double dy = pts[i + 1][2] - pts[i][2];
        acc += 0.5 * ((pts[i][2] - y0) + (pts[i + 1][2] - y0)) * dx;
        acc -= 0.5 * ((pts[i][1] - x0) + (pts[i + 1][1] - x0)) * dy;
    }
    return acc;
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3)
        throw std::invalid_argument("fit_power_law: need at least 3 points");
    const std::size_t n = points.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(points[i].first > 0.0) || !(points[i].second > 0.0))
            throw std::invalid_argument("fit_power_law: coordinates must be positive");
        lx[i] = std::log(points[i].first);
        ly[i] = std::log(points[i].second);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx <= 0.0) throw std::invalid_argument("fit_power_law: degenerate abscissae");
    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (ly[i] - my) - fit.exponent * (lx[i] - mx);
        ss_res += r * r;
    }
    fit.stderr_ = n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
    fit.r_squared = syy > 1e-300 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

ScanResult variance_scan(ScanQuantity quantity, HurstIndex alpha,
                         const std::vector<double>& controls, ControlKind kind,
                         int replicates, std::uint64_t base_seed,
                         const ScanConfig& config) {
    if (replicates < 100)
        throw std::invalid_argument("variance_scan: need at least 100 replicates");
    if (controls.size() < 3)
        throw std::invalid_argument("variance_scan: need at least 3 controls");
    for (std::size_t i = 1; i < controls.size(); ++i)
        if (!(controls[i] > controls[i - 1]))
            throw std::invalid_argument("variance_scan: controls must be strictly increasing");

    ScanResult result;
    result.alpha = alpha.alpha;
    result.base_seed = base_seed;
    result.replicates = replicates;

    for (double control : controls) {
        FrequencyGrid grid = [&] {
            if (kind == ControlKind::cutoff) {
                const int n = static_cast<int>(std::lround(control / config.spacing));
                if (n < 8) throw std::invalid_argument("variance_scan: cutoff too small for spacing");
                if (n > 2048) throw std::invalid_argument("variance_scan: more than 2048 modes per half-axis");
                return FrequencyGrid(n * config.spacing, n);
            }
            if (config.n_modes > 2048)
                throw std::invalid_argument("variance_scan: more than 2048 modes per half-axis");
            return FrequencyGrid(config.xi_max, config.n_modes);
        }();
        const double s = config.window_s;
        const double t = kind == ControlKind::increment ? s + control : s + config.window_h;

        std::vector<double> values(replicates);
        auto worker = [&](int lo, int hi) {
            for (int r = lo; r < hi; ++r) {
                const SpectralField noise =
                    gauss::sample_spectral_noise(grid, 2, base_seed + static_cast<std::uint64_t>(r));
                SpectralField n1(grid, 1), n2(grid, 1);
                for (int k = 0; k < grid.n_modes; ++k) {
                    n1.amp(0, k) = noise.amp(0, k);
                    n2.amp(0, k) = noise.amp(1, k);
                }
                double v = 0.0;
                switch (quantity) {
                    case ScanQuantity::a_plus:
                        v = sector_increment(n1, n2, Sector::plus, s, t, alpha);
                        break;
                    case ScanQuantity::a_minus:
                        v = sector_increment(n1, n2, Sector::minus, s, t, alpha);
                        break;
                    case ScanQuantity::boundary:
                        v = boundary_term(n1, n2, s, t, alpha);
                        break;
                    case ScanQuantity::full_area:
                        v = decompose_area(n1, n2, s, t, alpha).reconstruct();
                        break;
                }
                values[r] = v;
            }
        };
        const int workers = std::max(1, config.workers);
        if (workers == 1) {
            worker(0, replicates);
        } else {
            std::vector<std::thread> pool;
            const int chunk = (replicates + workers - 1) / workers;
            for (int w = 0; w < workers; ++w) {
                const int lo = w * chunk;
                const int hi = std::min(replicates, lo + chunk);
                if (lo < hi) pool.emplace_back(worker, lo, hi);
            }
            for (auto& th : pool) th.join();
        }

        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= replicates;
        double m2 = 0.0, m4 = 0.0;
        for (double v : values) {
            const double d2 = (v - mean) * (v - mean);
            m2 += d2;
            m4 += d2 * d2;
        }
        const double var = m2 / (replicates - 1);
        m4 /= replicates;
        const double se = std::sqrt(std::max(m4 - var * var, 0.0) / replicates);
        if (!(var > 0.0)) {
            throw std::runtime_error("variance_scan: degenerate fit, estimate <= 0 at control = " +
                                     std::to_string(control));
        }
        result.points.push_back({control, var, se});
        result.grid_spacing = grid.spacing;
        result.grid_xi_max = grid.xi_max;
    }

    std::vector<std::pair<double, double>> pts;
    for (const auto& p : result.points) pts.emplace_back(p.control, p.estimate);
    const PowerLawFit fit = fit_power_law(pts);
    result.fitted_exponent = fit.exponent;
    result.fit_stderr = fit.stderr_;
    result.r_squared = fit.r_squared;
    return result;
}

double holder_exponent_estimate(const SamplePath& path) {
    const std::size_t n = path.size();
    if (n < 64)
        throw std::invalid_argument("holder_exponent_estimate: need at least 64 samples");
    const double dt = path.times[1] - path.times[0];
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (std::abs((path.times[i + 1] - path.times[i]) - dt) > 1e-9 * dt)
            throw std::invalid_argument("holder_exponent_estimate: grid must be uniform");

    const int d = path.dimension();
    std::vector<std::pair<double, double>> pts;
    for (std::size_t lag = 1; lag <= std::min<std::size_t>(n / 4, 64); lag *= 2) {
        double mx = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) {
            double norm2 = 0.0;
            for (int c = 0; c < d; ++c) {
                const double diff = path.value(i + lag, c) - path.value(i, c);
                norm2 += diff * diff;
            }
            mx = std::max(mx, norm2);
        }
        if (mx == 0.0)
            throw std::invalid_argument("holder_exponent_estimate: constant path");
        pts.emplace_back(lag * dt, std::sqrt(mx));
    }
    return fit_power_law(pts).exponent;
}

}  // namespace roughlab::area
