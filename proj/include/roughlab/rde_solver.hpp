#pragma once

#include <functional>
#include <vector>

#include "roughlab/rough_algebra.hpp"
#include "roughlab/sample_path.hpp"

namespace roughlab::rde {

using State = std::vector<double>;
using Field = std::function<State(const State&)>;

// Driving vector fields V_1..V_d with directional-derivative access up to the
// scheme rank, by nested central finite differences unless exact linear data
// is supplied.
struct VectorFieldSystem {
    int d = 0;
    int state_dim = 0;
    std::vector<Field> fields;
    double fd_step = 1e-4;

    VectorFieldSystem(int d_, int state_dim_, std::vector<Field> fields_);
    // Linear system V_j(y) = A_j y; composites become exact matrix products.
    static VectorFieldSystem linear(const std::vector<std::vector<double>>& matrices,
                                    int state_dim);
};

// Word-indexed differential-operator composite applied to the identity,
// evaluated at y: length-1 words give V_i(y), longer words differentiate the
// shorter composite along V of the leading letter.  Letters are 0-based and
// the leading letter is the innermost (earliest) integration variable, the
// convention that makes the rank-N scheme match the ODE Taylor expansion.
State taylor_composite(const VectorFieldSystem& vfs, const algebra::Word& word,
                       const State& y);

// One step of the rank-N scheme:
// y + sum_{n=1..rank} sum_{|w|=n} taylor_composite(w, y) * increment.coeff(w).
State euler_step(const VectorFieldSystem& vfs,
                 const algebra::TruncatedSignature& driver_increment,
                 const State& y, int rank);

// Driver: either a sample path (signatures of the piecewise-linear
// interpolation, computed on demand), an explicit word functional, or a
// smooth path given by its velocity (signature integrated in the tensor
// algebra with a classical fourth-order rule).
class Driver {
  public:
    static Driver from_path(SamplePath path);
    static Driver from_functional(
        std::function<double(double, double, const algebra::Word&)> f, int d,
        int depth);
    static Driver from_smooth(std::function<std::vector<double>(double)> velocity,
                              int d, int substeps = 64);

    algebra::TruncatedSignature increment(double s, double t, int depth) const;
    int dimension() const { return d_; }
    int max_depth() const { return depth_; }

  private:
    Driver() = default;
    int d_ = 0;
    int depth_ = 6;
    std::function<algebra::TruncatedSignature(double, double, int)> make_;
};

// Iterated euler_step over consecutive partition increments; returns the full
// state trajectory (size = partition size).
std::vector<State> solve(const VectorFieldSystem& vfs, const Driver& driver,
                         const std::vector<double>& partition, const State& y0,
                         int rank);

}  // namespace roughlab::rde
