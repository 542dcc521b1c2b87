#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roughlab/gaussian_field.hpp"

namespace roughlab::qft {

using gauss::HurstIndex;

// Exact rational arithmetic for the power-counting identities.
struct Rational {
    long long num = 0;
    long long den = 1;
    Rational() = default;
    Rational(long long n, long long d = 1);
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator*(long long k) const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const;
    double to_double() const { return static_cast<double>(num) / den; }
};

struct LegCounts {
    int n_sigma = 0;
    int n_phi = 0;
    int n_dphi = 0;
    bool operator==(const LegCounts& o) const {
        return n_sigma == o.n_sigma && n_phi == o.n_phi && n_dphi == o.n_dphi;
    }
    bool operator<(const LegCounts& o) const;
};

// Overall degree of divergence 1 - 2a N_sigma + a N_phi + (a-1) N_dphi.
double degree_of_divergence(const LegCounts& legs, HurstIndex alpha);
Rational degree_of_divergence(const LegCounts& legs, const Rational& alpha);

enum class VertexKind { sigma_plus, sigma_minus };

// One sigma-, one phi1- and one phi2-port per vertex; the derivative sits on
// phi1 at a sigma_plus vertex and on phi2 at a sigma_minus vertex.  Lines pair
// ports of matching type on distinct vertices.
enum class LineType { sigma_plus, sigma_minus, phi1, phi2 };

struct Line {
    int v1 = 0;
    int v2 = 0;
    LineType type = LineType::phi1;
};

struct FeynmanDiagram {
    std::vector<VertexKind> vertices;
    std::vector<Line> lines;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int internal_sigma() const;
    int internal_phi() const;
    int loops() const;  // I - V + 1
    LegCounts legs() const;
    // Throws std::invalid_argument naming the violated incidence relation.
    void validate() const;
};

// Degree from the line structure:
// -(1-4a) I_sigma - (1+2a) I_phi + L + V - N_dphi.
double degree_from_structure(const FeynmanDiagram& diagram, HurstIndex alpha);
Rational degree_from_structure(const FeynmanDiagram& diagram, const Rational& alpha);

struct LegStructure {
    LegCounts legs;
    double degree = 0.0;
    int min_vertices = 0;
    bool dangerous = false;   // external legs all of type sigma or dphi
    bool divergent = false;   // degree >= 0 and dangerous
};

// All leg structures realizable by the incidence equations with V <= v_max
// vertices.  The divergent flag combines the power-counting degree with the
// Fourier-normal-ordering scale constraint (external phi legs carry the
// highest momentum at their vertex, so diagrams with phi legs are never
// dangerous).
std::vector<LegStructure> enumerate_leg_structures(int v_max, HurstIndex alpha);

// Exhaustive line-multiset enumeration (V <= 4), used as the oracle for
// enumerate_leg_structures and the degree identity.
std::vector<FeynmanDiagram> enumerate_diagrams(int v);

struct ModelParams {
    HurstIndex alpha;
    double lambda = 0.1;
    double M = 2.0;
    int rho = 0;
    double c_prime_alpha = 0.0;  // filled by make_model_params

    ModelParams(HurstIndex a, double lambda_, double M_, int rho_);
};

// Validates the renormalizability window a in (1/8, 1/4) and computes
// c'_alpha by quadrature.
ModelParams make_model_params(double alpha, double lambda, double M, int rho,
                              bool require_window = true);

// c'_alpha with the Fourier transform of c'_a |t|^{-4a} equal to |xi|^{4a-1};
// computed by oscillatory quadrature, cached per alpha.  Requires a < 1/4.
double c_prime_alpha(HurstIndex alpha);

// One-loop sigma self-energy (the bubble):
//   -lambda^2 |xi|^{8a-2} \int_{|xi1|<|xi-xi1|<=cutoff} |xi1|^{1-2a}
//        |xi-xi1|^{-1-2a} dxi1,
// amputated variant multiplies by (|xi|^{1-4a})^2.
double bubble_integral(double xi, double cutoff, const ModelParams& params,
                       bool amputated = false);

// Bubble constant K measured from the large-cutoff asymptotics of the
// amputated bubble (brute-force cutoff shape); cached per alpha.
double measured_bubble_constant(HurstIndex alpha);

// Resummed area spectrum, eq. of the bubble series:
//   lambda^{-2} |xi|^{1-4a} r/(1+r),  r = K lambda^2 (M^rho/|xi|)^{1-4a}.
double bubble_series_sum(double xi, const ModelParams& params, double K);

struct SigmaCovariance {
    enum class Kind { bare, renormalized };
    Kind kind = Kind::bare;
    double mass = 0.0;  // K lambda^2 (M^rho)^{1-4a}
    double alpha = 0.0;
    double lambda = 0.0;

    static SigmaCovariance bare(HurstIndex alpha, double lambda);
    static SigmaCovariance renormalized(const ModelParams& params, double K);
};

// 1 / (|xi|^{1-4a} + mass).
double renormalized_sigma_covariance(double xi, const SigmaCovariance& cov);

// Schwinger-Dyson identity:
//   <|F dA(xi)|^2> = lambda^{-2} |xi|^{1-4a} [ 1 - |xi|^{1-4a} S_sigma(xi) ].
double schwinger_dyson_area_spectrum(double sigma_spectrum_value, double xi,
                                     const ModelParams& params);

// Mixed <dA+ dA-> spectrum: -lambda^{-2} |xi|^{1-4a} / (1 + K'' lambda^2
// (M^rho/|xi|)^{1-4a}); vanishes as rho -> infinity.
double mixed_area_spectrum(double xi, const ModelParams& params, double K_pp);

// The mixed-sector constant is only constrained by K'' < K; returns a warning
// string when the constraint is violated.
std::optional<std::string> validate_mixed_constant(double K, double K_pp);

struct AreaVarianceBreakdown {
    double total = 0.0;
    double quadrature_part = 0.0;  // (4/lambda^2) K1 |t-s|^{4a}
    double boundary_part = 0.0;    // Monte-Carlo E|A+_b - A-_b|^2
    double K1 = 0.0;
    double K2_estimate = 0.0;      // boundary_part / |t-s|^{4a}
};

struct BoundaryMcOptions {
    double xi_max = 256.0;
    int n_modes = 2048;
    int replicates = 400;
    std::uint64_t base_seed = 2024;
};

// (2 pi c_a)^2 <A(s,t)^2> = (4/lambda^2) \int (1-cos((t-s)xi)) |xi|^{-1-4a}
// dxi + E|A+_b(s,t) - A-_b(s,t)|^2; the first term by quadrature, the second
// by area_analysis Monte Carlo.
AreaVarianceBreakdown interacting_area_increment_variance(
    double s, double t, const ModelParams& params, const BoundaryMcOptions& mc = {});

}  // namespace roughlab::qft
