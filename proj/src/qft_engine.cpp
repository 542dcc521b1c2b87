#include "roughlab/qft_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "roughlab/area_analysis.hpp"
#include "roughlab/quadrature.hpp"

namespace roughlab::qft {

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(std::abs(num), den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const {
    return Rational(num * o.num, den * o.den);
}
Rational Rational::operator*(long long k) const { return Rational(num * k, den); }
bool Rational::operator<(const Rational& o) const {
    return num * o.den < o.num * den;
}

bool LegCounts::operator<(const LegCounts& o) const {
    if (n_sigma != o.n_sigma) return n_sigma < o.n_sigma;
    if (n_phi != o.n_phi) return n_phi < o.n_phi;
    return n_dphi < o.n_dphi;
}

double degree_of_divergence(const LegCounts& legs, HurstIndex alpha) {
    const double a = alpha.alpha;
    return 1.0 - 2.0 * a * legs.n_sigma + a * legs.n_phi + (a - 1.0) * legs.n_dphi;
}

Rational degree_of_divergence(const LegCounts& legs, const Rational& alpha) {
    return Rational(1) - alpha * (2 * static_cast<long long>(legs.n_sigma)) +
           alpha * legs.n_phi + (alpha - Rational(1)) * legs.n_dphi;
}

namespace {

enum class Port { sigma, phi1, phi2 };

struct PortUse {
    bool sigma = false, phi1 = false, phi2 = false;
    bool& slot(Port p) {
        switch (p) {
            case Port::sigma: return sigma;
            case Port::phi1: return phi1;
            default: return phi2;
        }
    }
};

void use_port(std::vector<PortUse>& used, int v, Port p, const char* relation) {
    bool& slot = used[v].slot(p);
    if (slot)
        throw std::invalid_argument(std::string("FeynmanDiagram: port reused at vertex ") +
                                    std::to_string(v) + " (violates " + relation + ")");
    slot = true;
}

}  // namespace

void FeynmanDiagram::validate() const {
    const int V = vertex_count();
    if (V < 1) throw std::invalid_argument("FeynmanDiagram: need at least one vertex");
    std::vector<PortUse> used(V);
    for (const Line& line : lines) {
        if (line.v1 < 0 || line.v1 >= V || line.v2 < 0 || line.v2 >= V)
            throw std::invalid_argument("FeynmanDiagram: line endpoint out of range");
        if (line.v1 == line.v2)
            throw std::invalid_argument(
                "FeynmanDiagram: self-loop impossible (one port of each type per vertex)");
        switch (line.type) {
            case LineType::sigma_plus:
            case LineType::sigma_minus: {
                const VertexKind want = line.type == LineType::sigma_plus
                                            ? VertexKind::sigma_plus
                                            : VertexKind::sigma_minus;
                if (vertices[line.v1] != want || vertices[line.v2] != want)
                    throw std::invalid_argument(
                        "FeynmanDiagram: sigma line sign does not match vertex kinds "
                        "(E sigma+ sigma- = 0)");
                use_port(used, line.v1, Port::sigma, "2 I_sigma + N_sigma = V");
                use_port(used, line.v2, Port::sigma, "2 I_sigma + N_sigma = V");
                break;
            }
            case LineType::phi1:
                use_port(used, line.v1, Port::phi1, "2 I_phi + N_phi + N_dphi = 2V");
                use_port(used, line.v2, Port::phi1, "2 I_phi + N_phi + N_dphi = 2V");
                break;
            case LineType::phi2:
                use_port(used, line.v1, Port::phi2, "2 I_phi + N_phi + N_dphi = 2V");
                use_port(used, line.v2, Port::phi2, "2 I_phi + N_phi + N_dphi = 2V");
                break;
        }
    }
    if (loops() < 0)
        throw std::invalid_argument("FeynmanDiagram: loops L = I - V + 1 negative");
}

int FeynmanDiagram::internal_sigma() const {
    int c = 0;
    for (const Line& l : lines)
        if (l.type == LineType::sigma_plus || l.type == LineType::sigma_minus) ++c;
    return c;
}

int FeynmanDiagram::internal_phi() const {
    int c = 0;
    for (const Line& l : lines)
        if (l.type == LineType::phi1 || l.type == LineType::phi2) ++c;
    return c;
}

int FeynmanDiagram::loops() const {
    return static_cast<int>(lines.size()) - vertex_count() + 1;
}

LegCounts FeynmanDiagram::legs() const {
    const int V = vertex_count();
    std::vector<PortUse> used(V);
    for (const Line& l : lines) {
        Port p = Port::sigma;
        if (l.type == LineType::phi1) p = Port::phi1;
        if (l.type == LineType::phi2) p = Port::phi2;
        used[l.v1].slot(p) = true;
        used[l.v2].slot(p) = true;
    }
    LegCounts legs;
    for (int v = 0; v < V; ++v) {
        if (!used[v].sigma) ++legs.n_sigma;
        const bool plus = vertices[v] == VertexKind::sigma_plus;
        // the derivative rides phi1 at a sigma+ vertex, phi2 at a sigma- one
        if (!used[v].phi1) (plus ? legs.n_dphi : legs.n_phi)++;
        if (!used[v].phi2) (plus ? legs.n_phi : legs.n_dphi)++;
    }
    return legs;
}

double degree_from_structure(const FeynmanDiagram& diagram, HurstIndex alpha) {
    diagram.validate();
    const double a = alpha.alpha;
    const LegCounts legs = diagram.legs();
    return -(1.0 - 4.0 * a) * diagram.internal_sigma() -
           (1.0 + 2.0 * a) * diagram.internal_phi() + diagram.loops() +
           diagram.vertex_count() - legs.n_dphi;
}

Rational degree_from_structure(const FeynmanDiagram& diagram, const Rational& alpha) {
    diagram.validate();
    const LegCounts legs = diagram.legs();
    const Rational one(1);
    return (alpha * 4 - one) * diagram.internal_sigma() -
           (one + alpha * 2) * diagram.internal_phi() +
           Rational(diagram.loops() + diagram.vertex_count() - legs.n_dphi);
}

std::vector<LegStructure> enumerate_leg_structures(int v_max, HurstIndex alpha) {
    if (v_max < 1 || v_max > 8)
        throw std::invalid_argument("enumerate_leg_structures: v_max must be in 1..8");
    std::map<LegCounts, int> min_v;
    for (int V = 1; V <= v_max; ++V) {
        for (int vp = 0; vp <= V; ++vp) {
            const int vm = V - vp;
            for (int is_p = 0; 2 * is_p <= vp; ++is_p)
                for (int is_m = 0; 2 * is_m <= vm; ++is_m) {
                    const int n_sigma = (vp - 2 * is_p) + (vm - 2 * is_m);
                    for (int i1 = 0; 2 * i1 <= V; ++i1) {
                        const int e1 = V - 2 * i1;
                        const int d1_lo = std::max(0, vp - 2 * i1);
                        const int d1_hi = std::min(vp, e1);
                        for (int d1 = d1_lo; d1 <= d1_hi; ++d1)
                            for (int i2 = 0; 2 * i2 <= V; ++i2) {
                                const int e2 = V - 2 * i2;
                                const int d2_lo = std::max(0, vm - 2 * i2);
                                const int d2_hi = std::min(vm, e2);
                                for (int d2 = d2_lo; d2 <= d2_hi; ++d2) {
                                    LegCounts legs;
                                    legs.n_sigma = n_sigma;
                                    legs.n_dphi = d1 + d2;
                                    legs.n_phi = (e1 - d1) + (e2 - d2);
                                    if (legs.n_sigma + legs.n_phi + legs.n_dphi < 1)
                                        continue;  // vacuum structure
                                    auto it = min_v.find(legs);
                                    if (it == min_v.end())
                                        min_v.emplace(legs, V);
                                    else
                                        it->second = std::min(it->second, V);
                                }
                            }
                    }
                }
        }
    }
    std::vector<LegStructure> out;
    for (const auto& [legs, v] : min_v) {
        LegStructure s;
        s.legs = legs;
        s.degree = degree_of_divergence(legs, alpha);
        s.min_vertices = v;
        s.dangerous = legs.n_phi == 0;
        s.divergent = s.dangerous && s.degree >= 0.0;
        out.push_back(s);
    }
    return out;
}

namespace {

// All partial matchings of the index set `items`; each matching is a list of
// pairs plus the set of unmatched items, reported via the callback.
void partial_matchings(std::vector<int>& items,
                       std::vector<std::pair<int, int>>& acc,
                       const std::function<void(const std::vector<std::pair<int, int>>&)>& emit) {
    if (items.empty()) {
        emit(acc);
        return;
    }
    const int first = items[0];
    // leave `first` unmatched
    std::vector<int> rest(items.begin() + 1, items.end());
    partial_matchings(rest, acc, emit);
    // or pair it with any later item
    for (std::size_t m = 1; m < items.size(); ++m) {
        std::vector<int> rest2;
        for (std::size_t r = 1; r < items.size(); ++r)
            if (r != m) rest2.push_back(items[r]);
        acc.emplace_back(first, items[m]);
        partial_matchings(rest2, acc, emit);
        acc.pop_back();
    }
}

}  // namespace

std::vector<FeynmanDiagram> enumerate_diagrams(int v) {
    if (v < 1 || v > 4)
        throw std::invalid_argument("enumerate_diagrams: v must be in 1..4 (brute force)");
    std::vector<FeynmanDiagram> out;
    for (int mask = 0; mask < (1 << v); ++mask) {
        std::vector<VertexKind> kinds(v);
        std::vector<int> plus_vs, minus_vs, all_vs;
        for (int i = 0; i < v; ++i) {
            kinds[i] = (mask >> i) & 1 ? VertexKind::sigma_plus : VertexKind::sigma_minus;
            (kinds[i] == VertexKind::sigma_plus ? plus_vs : minus_vs).push_back(i);
            all_vs.push_back(i);
        }
        std::vector<std::pair<int, int>> acc_sp, acc_sm, acc_p1, acc_p2;
        partial_matchings(plus_vs, acc_sp, [&](const auto& sp) {
            partial_matchings(minus_vs, acc_sm, [&](const auto& sm) {
                std::vector<int> all1 = all_vs;
                partial_matchings(all1, acc_p1, [&](const auto& p1) {
                    std::vector<int> all2 = all_vs;
                    partial_matchings(all2, acc_p2, [&](const auto& p2) {
                        FeynmanDiagram d;
                        d.vertices = kinds;
                        for (auto [a, b] : sp) d.lines.push_back({a, b, LineType::sigma_plus});
                        for (auto [a, b] : sm) d.lines.push_back({a, b, LineType::sigma_minus});
                        for (auto [a, b] : p1) d.lines.push_back({a, b, LineType::phi1});
                        for (auto [a, b] : p2) d.lines.push_back({a, b, LineType::phi2});
                        const LegCounts legs = d.legs();
                        if (legs.n_sigma + legs.n_phi + legs.n_dphi < 1) return;
                        out.push_back(std::move(d));
                    });
                });
            });
        });
    }
    return out;
}

ModelParams::ModelParams(HurstIndex a, double lambda_, double M_, int rho_)
    : alpha(a), lambda(lambda_), M(M_), rho(rho_) {
    if (!(lambda_ > 0.0)) throw std::invalid_argument("ModelParams: lambda must be > 0");
    if (!(M_ > 1.0)) throw std::invalid_argument("ModelParams: M must be > 1");
    if (rho_ < 0) throw std::invalid_argument("ModelParams: rho must be >= 0");
}

double c_prime_alpha(HurstIndex alpha) {
    if (!(alpha.alpha < 0.25))
        throw std::invalid_argument("c_prime_alpha: requires alpha < 1/4");
    static std::map<double, double> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(alpha.alpha);
        if (it != cache.end()) return it->second;
    }
    // FT of c' |t|^{-4a} equals |xi|^{4a-1}  =>  c' = 1 / (2 \int t^{-4a} cos t dt)
    const double c = 1.0 / (2.0 * quad::cos_power_moment(4.0 * alpha.alpha));
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(alpha.alpha, c);
    return c;
}

ModelParams make_model_params(double alpha, double lambda, double M, int rho,
                              bool require_window) {
    HurstIndex a(alpha);
    if (require_window && !(alpha > 0.125 && alpha < 0.25))
        throw std::invalid_argument(
            "make_model_params: renormalizability window requires alpha in (1/8, 1/4)");
    if (!(alpha < 0.5))
        throw std::invalid_argument("make_model_params: alpha must be < 1/2");
    ModelParams p(a, lambda, M, rho);
    p.c_prime_alpha = alpha < 0.25 ? c_prime_alpha(a) : 0.0;
    return p;
}

namespace {

// \int_{xi-cutoff}^{xi/2} |u|^{1-2a} |xi-u|^{-1-2a} du for xi > 0.
double bubble_raw(double xi, double cutoff, double a) {
    const auto f = [xi, a](double u) {
        return std::pow(std::abs(u), 1.0 - 2.0 * a) *
               std::pow(std::abs(xi - u), -1.0 - 2.0 * a);
    };
    // [0, xi/2]: |u|^{1-2a} kink at the endpoint
    const double head = quad::integrate_singular(f, 0.0, xi * 0.5, 1e-9);
    // [xi - cutoff, 0]: substitute u = -e^v to handle the huge range
    const double lo = cutoff - xi;  // length of the negative part
    double body = quad::integrate_singular(f, -std::min(1.0, lo), 0.0, 1e-9);
    if (lo > 1.0) {
        const auto g = [xi, a](double v) {
            const double u = std::exp(v);
            return std::pow(u, 2.0 - 2.0 * a) * std::pow(xi + u, -1.0 - 2.0 * a);
        };
        body += quad::integrate(g, 0.0, std::log(lo), 1e-9);
    }
    return head + body;
}

}  // namespace

double bubble_integral(double xi, double cutoff, const ModelParams& params,
                       bool amputated) {
    if (xi == 0.0) throw std::invalid_argument("bubble_integral: xi must be nonzero");
    const double ax = std::abs(xi);
    if (!(cutoff > ax))
        throw std::invalid_argument("bubble_integral: cutoff must exceed |xi|");
    const double a = params.alpha.alpha;
    const double I = bubble_raw(ax, cutoff, a);
    const double lam2 = params.lambda * params.lambda;
    if (amputated) return -lam2 * I;
    return -lam2 * std::pow(ax, 8.0 * a - 2.0) * I;
}

double measured_bubble_constant(HurstIndex alpha) {
    static std::map<double, double> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(alpha.alpha);
        if (it != cache.end()) return it->second;
    }
    const double a = alpha.alpha;
    const double p = 1.0 - 4.0 * a;
    const double L1 = std::pow(2.0, 34), L2 = std::pow(2.0, 36);
    const double K = (bubble_raw(1.0, L2, a) - bubble_raw(1.0, L1, a)) /
                     (std::pow(L2, p) - std::pow(L1, p));
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(alpha.alpha, K);
    return K;
}

double bubble_series_sum(double xi, const ModelParams& params, double K) {
    if (!(K > 0.0)) throw std::invalid_argument("bubble_series_sum: K must be > 0");
    if (xi == 0.0) throw std::invalid_argument("bubble_series_sum: xi must be nonzero");
    const double ax = std::abs(xi);
    const double top = std::pow(params.M, params.rho);
    if (!(ax <= top))
        throw std::invalid_argument("bubble_series_sum: |xi| must not exceed M^rho");
    const double p = 1.0 - 4.0 * params.alpha.alpha;
    const double r = K * params.lambda * params.lambda * std::pow(top / ax, p);
    return std::pow(ax, p) / (params.lambda * params.lambda) * (r / (1.0 + r));
}

SigmaCovariance SigmaCovariance::bare(HurstIndex alpha, double lambda) {
    SigmaCovariance c;
    c.kind = Kind::bare;
    c.mass = 0.0;
    c.alpha = alpha.alpha;
    c.lambda = lambda;
    return c;
}

SigmaCovariance SigmaCovariance::renormalized(const ModelParams& params, double K) {
    if (!(K > 0.0))
        throw std::invalid_argument("SigmaCovariance::renormalized: K must be > 0");
    SigmaCovariance c;
    c.kind = Kind::renormalized;
    c.alpha = params.alpha.alpha;
    c.lambda = params.lambda;
    c.mass = K * params.lambda * params.lambda *
             std::pow(std::pow(params.M, params.rho), 1.0 - 4.0 * c.alpha);
    return c;
}

double renormalized_sigma_covariance(double xi, const SigmaCovariance& cov) {
    if (xi == 0.0)
        throw std::invalid_argument("renormalized_sigma_covariance: xi must be nonzero");
    const double p = 1.0 - 4.0 * cov.alpha;
    return 1.0 / (std::pow(std::abs(xi), p) + cov.mass);
}

double schwinger_dyson_area_spectrum(double sigma_spectrum_value, double xi,
                                     const ModelParams& params) {
    if (xi == 0.0)
        throw std::invalid_argument("schwinger_dyson_area_spectrum: xi must be nonzero");
    if (sigma_spectrum_value < 0.0)
        throw std::invalid_argument("schwinger_dyson_area_spectrum: spectrum must be >= 0");
    const double p = std::pow(std::abs(xi), 1.0 - 4.0 * params.alpha.alpha);
    return p / (params.lambda * params.lambda) * (1.0 - p * sigma_spectrum_value);
}

double mixed_area_spectrum(double xi, const ModelParams& params, double K_pp) {
    if (!(K_pp > 0.0)) throw std::invalid_argument("mixed_area_spectrum: K'' must be > 0");
    if (xi == 0.0) throw std::invalid_argument("mixed_area_spectrum: xi must be nonzero");
    const double pexp = 1.0 - 4.0 * params.alpha.alpha;
    const double ax = std::abs(xi);
    const double p = std::pow(ax, pexp);
    const double r = K_pp * params.lambda * params.lambda *
                     std::pow(std::pow(params.M, params.rho) / ax, pexp);
    return -p / (params.lambda * params.lambda) / (1.0 + r);
}

std::optional<std::string> validate_mixed_constant(double K, double K_pp) {
    if (K_pp >= K)
        return "mixed-sector constant K'' should be below K (scale constraints on "
               "mixed bubbles); got K'' >= K";
    return std::nullopt;
}

AreaVarianceBreakdown interacting_area_increment_variance(
    double s, double t, const ModelParams& params, const BoundaryMcOptions& mc) {
    if (!(s < t))
        throw std::invalid_argument("interacting_area_increment_variance: need s < t");
    const double a = params.alpha.alpha;
    if (!(a < 0.5))
        throw std::invalid_argument("interacting_area_increment_variance: need alpha < 1/2");
    const double h = t - s;

    AreaVarianceBreakdown out;
    out.K1 = 2.0 * quad::one_minus_cos_moment(4.0 * a);
    out.quadrature_part =
        4.0 / (params.lambda * params.lambda) * out.K1 * std::pow(h, 4.0 * a);

    const gauss::FrequencyGrid grid(mc.xi_max, mc.n_modes);
    double acc = 0.0;
    for (int r = 0; r < mc.replicates; ++r) {
        const gauss::SpectralField noise = gauss::sample_spectral_noise(
            grid, 2, mc.base_seed + static_cast<std::uint64_t>(r));
        gauss::SpectralField n1(grid, 1), n2(grid, 1);
        for (int k = 0; k < grid.n_modes; ++k) {
            n1.amp(0, k) = noise.amp(0, k);
            n2.amp(0, k) = noise.amp(1, k);
        }
        const double b = area::boundary_term(n1, n2, s, t, params.alpha);
        acc += b * b;
    }
    out.boundary_part = acc / mc.replicates;
    out.K2_estimate = out.boundary_part / std::pow(h, 4.0 * a);
    out.total = out.quadrature_part + out.boundary_part;
    return out;
}

}  // namespace roughlab::qft
