#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "roughlab/sample_path.hpp"

namespace roughlab::gauss {

struct HurstIndex {
    double alpha;
    explicit HurstIndex(double a);
};

// Uniform half-integer frequency grid: xi_k = (k + 1/2) * spacing for
// k = 0..n_modes-1, mirrored to the negative axis.  xi = 0 never lies on the
// grid, which keeps the stationary field's infrared singularity off it.
struct FrequencyGrid {
    double xi_max;
    int n_modes;
    double spacing;

    FrequencyGrid(double xi_max_, int n_modes_);
    double mode(int k) const { return (k + 0.5) * spacing; }
    bool operator==(const FrequencyGrid& o) const {
        return xi_max == o.xi_max && n_modes == o.n_modes;
    }
};

// Discretized spectral white noise dW.  Only positive-frequency amplitudes are
// stored; the measure on the negative axis is the complex conjugate, so
// reconstructed fields are real.  E|amp|^2 = spacing per mode.
struct SpectralField {
    FrequencyGrid grid;
    int components;
    std::vector<std::complex<double>> amps;  // components x n_modes, row-major

    SpectralField(FrequencyGrid g, int d)
        : grid(g), components(d),
          amps(static_cast<std::size_t>(d) * g.n_modes) {}
    std::complex<double> amp(int c, int k) const {
        return amps[static_cast<std::size_t>(c) * grid.n_modes + k];
    }
    std::complex<double>& amp(int c, int k) {
        return amps[static_cast<std::size_t>(c) * grid.n_modes + k];
    }
};

// High-frequency extension on a geometric ladder of cells above the uniform
// grid.  Each cell contributes one mode whose frequency is drawn from the
// spectral density restricted to the cell and whose amplitude variance equals
// the cell mass, so every increment variance is matched in expectation no
// matter where the cells sit.  Used by the fBm sampler to keep the truncation
// error of the variance integral below Monte-Carlo resolution.
struct SpectralTail {
    double alpha;
    int components;
    std::vector<double> freqs;                // per mode (shared across components)
    std::vector<std::complex<double>> amps;   // components x freqs.size()
    std::complex<double> amp(int c, std::size_t j) const {
        return amps[static_cast<std::size_t>(c) * freqs.size() + j];
    }
};

// Smooth dyadic partition of unity built from the exp(-1/x) mollifier:
// chi0 == 1 on |xi| <= 1, == 0 on |xi| >= M, and chi_j for j >= 1 telescopes,
// chi_j(xi) = chi0(M^-j xi) - chi0(M^-(j-1) xi), so that
// sum_{j=0}^{rho} chi_j(xi) = chi0(M^-rho xi) exactly.
struct CutoffSpec {
    double M;
    int rho;
    double chi0_support;                    // chi0 vanishes beyond this
    std::pair<double, double> chi1_support; // chi1 lives inside (lo, hi)

    CutoffSpec(double M_, int rho_);
    double chi0(double xi) const;
    double chi_j(int j, double xi) const;        // j >= 0
    double cutoff_multiplier(double xi) const;   // sum of slices 0..rho
};

// Normalization c_alpha fixing E(B_t - B_s)^2 = |t-s|^{2 alpha}; computed by
// adaptive quadrature once per alpha and cached.
double normalization_constant(HurstIndex alpha);

// Closed-form fBm covariance (|s|^{2a} + |t|^{2a} - |t-s|^{2a}) / 2.
double fbm_covariance(double s, double t, HurstIndex alpha);

// Independent complex Gaussians per positive mode and component,
// variance = grid.spacing.  Stream per (component, mode index), so grids that
// share spacing see identical amplitudes on shared modes (common random
// numbers across cutoff scans).
SpectralField sample_spectral_noise(const FrequencyGrid& grid, int d,
                                    std::uint64_t seed);

// Stratified geometric tail over [xi_start, xi_end], modes_per_octave cells
// per frequency doubling.  See SpectralTail.
SpectralTail sample_spectral_tail(double xi_start, double xi_end,
                                  int modes_per_octave, int d,
                                  std::uint64_t seed, HurstIndex alpha);

// Harmonizable-representation path: B_t = (2 pi c_a)^{-1/2}
// sum_xi (e^{i t xi} - 1)/(i xi) |xi|^{1/2-a} dW(xi).  B_0 = 0 exactly.
SamplePath fbm_from_spectrum(const SpectralField& noise,
                             const std::vector<double>& times, HurstIndex alpha);
SamplePath fbm_from_spectrum(const SpectralField& noise, const SpectralTail& tail,
                             const std::vector<double>& times, HurstIndex alpha);

// Splits a field into rho+1 spectral slices; the pointwise sum of the slice
// multipliers equals the <=rho cutoff multiplier.
std::vector<SpectralField> decompose_scales(const SpectralField& noise,
                                            const CutoffSpec& cutoff);

// Wick / Isserlis moment: sum over all (2n-1)!! pairings of the indices of
// products of covariance entries.  Odd-length index lists are an error.
double wick_moment(const std::vector<std::vector<double>>& cov,
                   const std::vector<int>& indices);

}  // namespace roughlab::gauss
