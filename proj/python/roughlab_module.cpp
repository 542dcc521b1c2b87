// Python bindings for the main operations.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "roughlab/area_analysis.hpp"
#include "roughlab/gaussian_field.hpp"
#include "roughlab/qft_engine.hpp"
#include "roughlab/rde_solver.hpp"
#include "roughlab/rough_algebra.hpp"
#include "roughlab/version.hpp"

namespace py = pybind11;
using namespace roughlab;

namespace {

SamplePath make_sample_path(std::vector<double> times, std::vector<double> values, int d,
                            double alpha) {
    return SamplePath(std::move(times), std::move(values), d, alpha);
}

SamplePath sample_fbm(double alpha, double xi_max, int n_modes,
                      const std::vector<double>& times, std::uint64_t seed, int d,
                      bool with_tail) {
    const gauss::HurstIndex a(alpha);
    const gauss::FrequencyGrid grid(xi_max, n_modes);
    const auto noise = gauss::sample_spectral_noise(grid, d, seed);
    if (!with_tail) return gauss::fbm_from_spectrum(noise, times, a);
    const auto tail = gauss::sample_spectral_tail(xi_max, 1e9, 16, d, seed, a);
    return gauss::fbm_from_spectrum(noise, tail, times, a);
}

}  // namespace

PYBIND11_MODULE(roughlab, m) {
    m.doc() = "fractional Brownian motion spectral lab: Levy-area sector analysis, "
              "rough-path algebra, rank-N Euler schemes, perturbative power counting";
    m.attr("__version__") = roughlab::version;

    py::class_<SamplePath>(m, "SamplePath")
        .def(py::init(&make_sample_path), py::arg("times"), py::arg("values"),
             py::arg("d"), py::arg("alpha") = 0.0)
        .def_readonly("times", &SamplePath::times)
        .def_readonly("values", &SamplePath::values)
        .def_property_readonly("d", &SamplePath::dimension)
        .def("__len__", &SamplePath::size);

    m.def("normalization_constant",
          [](double a) { return gauss::normalization_constant(gauss::HurstIndex(a)); },
          py::arg("alpha"));
    m.def("fbm_covariance",
          [](double s, double t, double a) {
              return gauss::fbm_covariance(s, t, gauss::HurstIndex(a));
          },
          py::arg("s"), py::arg("t"), py::arg("alpha"));
    m.def("sample_fbm", &sample_fbm, py::arg("alpha"), py::arg("xi_max"),
          py::arg("n_modes"), py::arg("times"), py::arg("seed") = 1, py::arg("d") = 1,
          py::arg("with_tail") = true);
    m.def("wick_moment", &gauss::wick_moment, py::arg("cov"), py::arg("indices"));

    m.def("levy_area_discrete", &area::levy_area_discrete, py::arg("path"), py::arg("s"),
          py::arg("t"));
    m.def("iterated_integral_discrete", &area::iterated_integral_discrete,
          py::arg("path"), py::arg("s"), py::arg("t"));
    m.def("holder_exponent_estimate", &area::holder_exponent_estimate, py::arg("path"));
    m.def("fit_power_law", [](const std::vector<std::pair<double, double>>& pts) {
        const auto f = area::fit_power_law(pts);
        return py::make_tuple(f.exponent, f.stderr_, f.r_squared);
    });

    py::class_<algebra::TruncatedSignature>(m, "TruncatedSignature")
        .def_readonly("d", &algebra::TruncatedSignature::d)
        .def_readonly("depth", &algebra::TruncatedSignature::depth)
        .def_readonly("levels", &algebra::TruncatedSignature::levels)
        .def("coeff",
             [](const algebra::TruncatedSignature& s, const algebra::Word& w) {
                 return s.coeff(w);
             });
    m.def("signature",
          [](const SamplePath& p, int depth) { return algebra::signature(p, depth); },
          py::arg("path"), py::arg("depth"));
    m.def("chen_product", &algebra::chen_product);
    m.def("log_signature", &algebra::log_signature);
    m.def("shuffle_words", &algebra::shuffle_words);
    m.def("check_shuffle", &algebra::check_shuffle);
    m.def("heisenberg_product", [](std::array<double, 3> a, std::array<double, 3> b) {
        const auto r = algebra::heisenberg_product({a[0], a[1], a[2]}, {b[0], b[1], b[2]});
        return std::array<double, 3>{r.x, r.y, r.z};
    });

    m.def("degree_of_divergence",
          [](int n_sigma, int n_phi, int n_dphi, double alpha) {
              return qft::degree_of_divergence({n_sigma, n_phi, n_dphi},
                                               gauss::HurstIndex(alpha));
          },
          py::arg("n_sigma"), py::arg("n_phi"), py::arg("n_dphi"), py::arg("alpha"));
    m.def("divergent_structures", [](int v_max, double alpha) {
        std::vector<std::tuple<int, int, int>> out;
        for (const auto& s : qft::enumerate_leg_structures(v_max, gauss::HurstIndex(alpha)))
            if (s.divergent)
                out.emplace_back(s.legs.n_sigma, s.legs.n_phi, s.legs.n_dphi);
        return out;
    });
    m.def("bubble_series_sum", [](double xi, double alpha, double lam, double M, int rho,
                                  double K) {
        return qft::bubble_series_sum(xi, qft::make_model_params(alpha, lam, M, rho, false), K);
    });
    m.def("renormalized_sigma_covariance",
          [](double xi, double alpha, double lam, double M, int rho, double K) {
              const auto params = qft::make_model_params(alpha, lam, M, rho, false);
              return qft::renormalized_sigma_covariance(
                  xi, qft::SigmaCovariance::renormalized(params, K));
          });
    m.def("schwinger_dyson_area_spectrum",
          [](double sigma_spectrum, double xi, double alpha, double lam, double M, int rho) {
              return qft::schwinger_dyson_area_spectrum(
                  sigma_spectrum, xi, qft::make_model_params(alpha, lam, M, rho, false));
          });

    m.def("euler_solve_linear",
          [](const std::vector<std::vector<double>>& matrices, int state_dim,
             const std::vector<double>& y0, const std::vector<double>& partition, int rank,
             const std::function<std::vector<double>(double)>& velocity) {
              const auto vfs = rde::VectorFieldSystem::linear(matrices, state_dim);
              const auto driver = rde::Driver::from_smooth(
                  velocity, static_cast<int>(matrices.size()), 64);
              return rde::solve(vfs, driver, partition, y0, rank);
          },
          py::arg("matrices"), py::arg("state_dim"), py::arg("y0"), py::arg("partition"),
          py::arg("rank"), py::arg("velocity"));
}
