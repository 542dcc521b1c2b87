#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "roughlab/gaussian_field.hpp"
#include "roughlab/sample_path.hpp"

namespace roughlab::area {

using gauss::FrequencyGrid;
using gauss::HurstIndex;
using gauss::SpectralField;

enum class Sector { plus, minus };
enum class ScanQuantity { a_plus, a_minus, boundary, full_area };
enum class ControlKind { cutoff, increment };

// Fourier-normal-ordered split of the second iterated integral over [s,t]:
// the two one-time sector skeletons contribute their increments, the rest is
// the boundary term.  reconstruct() undoes the split.
struct AreaDecomposition {
    double a_plus_increment = 0.0;
    double a_minus_increment = 0.0;
    double boundary = 0.0;
    double s = 0.0;
    double t = 0.0;
    double c_alpha = 1.0;

    double reconstruct() const {
        return (a_plus_increment - a_minus_increment + boundary) /
               (2.0 * M_PI * c_alpha);
    }
};

// Antisymmetric (signed-area) combination
//   int (G2 - G2(s)) dG1 - int (G1 - G1(s)) dG2
// by trapezoidal rule over the sample sub-grid of [s,t]; endpoints are
// linearly interpolated.  Swapping the two components negates it exactly.
double levy_area_discrete(const SamplePath& path, double s, double t);

// The plain second iterated integral int (G2 - G2(s)) dG1 over [s,t]; this is
// the quantity the sector decomposition reconstructs.
double iterated_integral_discrete(const SamplePath& path, double s, double t);

// One-time sector skeleton:
//   A+(t) = sum_{|xi1| <= |xi2|} W1 W2 |xi1 xi2|^{1/2-a}
//           e^{i t (xi1+xi2)} / [(i(xi1+xi2)) (i xi2)]
// (minus sector swaps the roles of xi1 and xi2).  Magnitude ties go to the
// plus sector; pairs with xi1 + xi2 = 0 are excluded (their skeleton has no
// one-time value; see decompose_area for how increments handle them).
double skeleton_area_sector(const SpectralField& noise1, const SpectralField& noise2,
                            Sector sector, double t, HurstIndex alpha);
std::complex<double> skeleton_area_sector_full(const SpectralField& noise1,
                                               const SpectralField& noise2,
                                               Sector sector, double t,
                                               HurstIndex alpha);

// Boundary term A+_b(s,t) - A-_b(s,t) of the sector split.
double boundary_term(const SpectralField& noise1, const SpectralField& noise2,
                     double s, double t, HurstIndex alpha);

// Sector increments + boundary for one realization.  Exact on the grid: for
// every realization reconstruct() equals the second iterated integral of the
// trigonometric-polynomial paths carried by the fields, so the discrepancy
// against iterated_integral_discrete is pure time-discretization error.
AreaDecomposition decompose_area(const SpectralField& noise1,
                                 const SpectralField& noise2, double s, double t,
                                 HurstIndex alpha);

struct ScanPoint {
    double control = 0.0;
    double estimate = 0.0;
    double mc_error = 0.0;
};

struct PowerLawFit {
    double exponent = 0.0;
    double stderr_ = 0.0;
    double r_squared = 0.0;
};

struct ScanResult {
    std::vector<ScanPoint> points;
    double fitted_exponent = 0.0;
    double fit_stderr = 0.0;
    double r_squared = 0.0;
    // metadata
    double alpha = 0.0;
    std::uint64_t base_seed = 0;
    int replicates = 0;
    double grid_spacing = 0.0;
    double grid_xi_max = 0.0;
};

struct ScanConfig {
    // cutoff scans: spacing is held fixed and n_modes = control / spacing,
    // so seeds and shared modes coincide across controls (common random
    // numbers).  Capped at 2048 modes per half-axis.
    double spacing = 0.125;
    // increment scans: one fixed grid.
    double xi_max = 256.0;
    int n_modes = 2048;
    // increment window: [window_s, window_s + h]; cutoff scans use h = window_h.
    double window_s = 0.3;
    double window_h = 1.0;
    int workers = 1;
};

// Monte-Carlo variance of the selected quantity versus the control parameter,
// with a log-log power-law fit.  Sector quantities are measured on increments
// over the configured window.
ScanResult variance_scan(ScanQuantity quantity, HurstIndex alpha,
                         const std::vector<double>& controls, ControlKind kind,
                         int replicates, std::uint64_t base_seed,
                         const ScanConfig& config = {});

// Ordinary least squares on (log control, log value); all inputs must be > 0.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

// Regression of log max-increment over dyadic lags against log lag.
double holder_exponent_estimate(const SamplePath& path);

}  // namespace roughlab::area
