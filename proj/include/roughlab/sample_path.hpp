#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace roughlab {

// Uniformly or non-uniformly sampled d-component real path on a time grid.
struct SamplePath {
    std::vector<double> times;   // strictly increasing
    std::vector<double> values;  // row-major, times.size() x d
    double alpha = 0.0;          // Hurst index of the generating law, 0 if n/a
    std::uint64_t seed = 0;

    SamplePath() = default;
    SamplePath(std::vector<double> t, std::vector<double> v, int d,
               double a = 0.0, std::uint64_t s = 0)
        : times(std::move(t)), values(std::move(v)), alpha(a), seed(s), d_(d) {
        if (d_ < 1) throw std::invalid_argument("SamplePath: d must be >= 1");
        if (values.size() != times.size() * static_cast<std::size_t>(d_))
            throw std::invalid_argument("SamplePath: values shape mismatch");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw std::invalid_argument("SamplePath: times must be strictly increasing");
    }

    int dimension() const { return d_; }
    std::size_t size() const { return times.size(); }
    double value(std::size_t i, int c) const { return values[i * d_ + c]; }
    double& value(std::size_t i, int c) { return values[i * d_ + c]; }

  private:
    int d_ = 1;
};

}  // namespace roughlab
