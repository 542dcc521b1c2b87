#pragma once

#include <functional>
#include <vector>

#include "roughlab/sample_path.hpp"

namespace roughlab::algebra {

// Letters are 0-based: 0..d-1.
using Word = std::vector<int>;

// Level-indexed dense tensors over d letters, levels 0..depth.  Level n is
// stored row-major with the first letter as the most significant digit.
// Index convention: coeff({i1,...,in}) is the iterated integral with i1
// attached to the innermost (earliest) integration variable, so that the
// signature of the concatenation a.b is chen_product(sig(a), sig(b)).
struct TruncatedSignature {
    int d = 0;
    int depth = 0;
    std::vector<std::vector<double>> levels;

    TruncatedSignature() = default;
    TruncatedSignature(int d_, int depth_);
    static TruncatedSignature identity(int d, int depth);

    double coeff(const Word& w) const;
    double& coeff(const Word& w);
    std::size_t word_index(const Word& w) const;
};

// exp of a single straight segment with the given increment vector.
TruncatedSignature segment_exponential(const std::vector<double>& increment, int depth);

// Signature of the piecewise-linear interpolation of the samples.
TruncatedSignature signature(const SamplePath& path, int depth);
// Same, over [s,t] with linearly interpolated endpoints.
TruncatedSignature signature(const SamplePath& path, double s, double t, int depth);

// Truncated tensor product; level n of the result is
// sum_{n1+n2=n} a^{n1} (x) b^{n2}.
TruncatedSignature chen_product(const TruncatedSignature& a, const TruncatedSignature& b);

// All order-preserving interleavings, with multiplicity (duplicates repeat).
std::vector<Word> shuffle_words(const Word& i, const Word& j);

// Max violation of Gamma(i)Gamma(j) = sum over shuffles Gamma(k) over word
// pairs with |i| + |j| <= depth.
double check_shuffle(const TruncatedSignature& sig);

// Tensor logarithm (level 0 of the result is 0); requires level 0 == 1.
TruncatedSignature log_signature(const TruncatedSignature& sig);
// Tensor exponential of a level-0-free element.
TruncatedSignature exp_tensor(const TruncatedSignature& lie);

// d = N = 2 Carnot picture in exponential coordinates.
struct HeisenbergElement {
    double x = 0.0, y = 0.0, z = 0.0;
};
HeisenbergElement heisenberg_product(const HeisenbergElement& g1,
                                     const HeisenbergElement& g2);
HeisenbergElement heisenberg_inverse(const HeisenbergElement& g);
// (level-1, antisymmetric level-2) -> (x, y, z); requires d == 2, depth >= 2.
HeisenbergElement to_heisenberg(const TruncatedSignature& sig);

// Candidate rough path presented as a two-parameter word functional.
using RoughFunctional = std::function<double(double s, double t, const Word&)>;

struct RoughPathReport {
    double max_chen_violation = 0.0;
    double max_shuffle_violation = 0.0;
    std::vector<double> holder_ratios;  // per level 1..depth: sup |G^n_ts| / |t-s|^{n a}
    int depth = 0;
};

// Checks the three rough-path properties on the sample grid; the depth is
// floor(1/alpha) capped at 6.
RoughPathReport validate_rough_path(const RoughFunctional& functional, double alpha,
                                    const std::vector<double>& sample_times, int d);

}  // namespace roughlab::algebra
