// Experiment runner: every module is exposed as a subcommand that reads one
// JSON config (flags override config keys), writes CSV/JSON artifacts plus a
// manifest, and exits 0 on success, 2 on validation errors, 3 on numerical
// failures.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "roughlab/area_analysis.hpp"
#include "roughlab/gaussian_field.hpp"
#include "roughlab/io.hpp"
#include "roughlab/qft_engine.hpp"
#include "roughlab/rde_solver.hpp"
#include "roughlab/rough_algebra.hpp"
#include "roughlab/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace roughlab;

namespace {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Effective configuration: defaults, overlaid by --config, overlaid by flags.
class Config {
  public:
    json data = json::object();

    void merge_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw ValidationError("config: cannot open " + path);
        json file_cfg;
        try {
            is >> file_cfg;
        } catch (const std::exception& e) {
            throw ValidationError(std::string("config: parse error: ") + e.what());
        }
        data.merge_patch(file_cfg);
    }

    template <typename T>
    T get(const std::string& pointer, T fallback) const {
        const json::json_pointer p(pointer);
        if (!data.contains(p)) return fallback;
        try {
            return data.at(p).get<T>();
        } catch (const std::exception&) {
            throw ValidationError("config: bad value at " + pointer);
        }
    }

    template <typename T>
    T require(const std::string& pointer) const {
        const json::json_pointer p(pointer);
        if (!data.contains(p)) throw ValidationError("config: missing value at " + pointer);
        try {
            return data.at(p).get<T>();
        } catch (const std::exception&) {
            throw ValidationError("config: bad value at " + pointer);
        }
    }

    void set(const std::string& pointer, json value) {
        data[json::json_pointer(pointer)] = std::move(value);
    }
};

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Collects artifacts so a failing run leaves nothing behind.
class OutputSet {
  public:
    OutputSet(fs::path dir, std::string prefix, bool dry)
        : dir_(std::move(dir)), prefix_(std::move(prefix)), dry_(dry) {
        if (!dry_) fs::create_directories(dir_);
    }

    fs::path path(const std::string& suffix) const { return dir_ / (prefix_ + suffix); }

    void write_text(const std::string& suffix, const std::string& text) {
        if (dry_) return;
        const fs::path p = path(suffix);
        std::ofstream os(p, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + p.string());
        os << text;
        written_.push_back(p);
    }

    template <typename Fn>
    void write_stream(const std::string& suffix, Fn&& fn) {
        if (dry_) return;
        const fs::path p = path(suffix);
        std::ofstream os(p, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + p.string());
        fn(os);
        written_.push_back(p);
    }

    void write_manifest(const std::string& command, const Config& cfg,
                        std::uint64_t base_seed) {
        if (dry_) return;
        json manifest;
        manifest["command"] = command;
        manifest["config"] = cfg.data;
        manifest["config_hash"] = fnv1a(cfg.data.dump());
        manifest["base_seed"] = base_seed;
        manifest["version"] = roughlab::version;
        json outs = json::array();
        for (const auto& p : written_) outs.push_back(p.filename().string());
        manifest["outputs"] = std::move(outs);
        // Isolated in its own key so reruns can be compared byte-for-byte
        // after dropping it.
        manifest["timestamp"]["written_at_unix"] = static_cast<long long>(std::time(nullptr));
        write_text("manifest.json", manifest.dump(2) + "\n");
    }

    void discard_all() {
        for (const auto& p : written_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        written_.clear();
    }

  private:
    fs::path dir_;
    std::string prefix_;
    bool dry_;
    std::vector<fs::path> written_;
};

int worker_count() {
    if (const char* env = std::getenv("ROUGHLAB_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    return 1;
}

gauss::FrequencyGrid grid_from_config(const Config& cfg) {
    const double xi_max = cfg.get<double>("/grid/xi_max", 256.0);
    const int n_modes = cfg.get<int>("/grid/n_modes", 2048);
    try {
        return gauss::FrequencyGrid(xi_max, n_modes);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("/grid: ") + e.what());
    }
}

gauss::HurstIndex alpha_from_config(const Config& cfg) {
    const double a = cfg.get<double>("/alpha", 0.3);
    try {
        return gauss::HurstIndex(a);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("/alpha: ") + e.what());
    }
}

std::vector<double> uniform_times(double t0, double t1, int samples) {
    if (samples < 1 || !(t1 > t0)) throw ValidationError("/times: need t1 > t0, samples >= 1");
    std::vector<double> ts(samples + 1);
    for (int i = 0; i <= samples; ++i) ts[i] = t0 + (t1 - t0) * i / samples;
    return ts;
}

std::pair<gauss::SpectralField, gauss::SpectralField> split_two(
    const gauss::SpectralField& both) {
    gauss::SpectralField n1(both.grid, 1), n2(both.grid, 1);
    for (int k = 0; k < both.grid.n_modes; ++k) {
        n1.amp(0, k) = both.amp(0, k);
        n2.amp(0, k) = both.amp(1, k);
    }
    return {std::move(n1), std::move(n2)};
}

SamplePath builtin_path(const std::string& kind) {
    if (kind == "square_corner")
        return SamplePath({0.0, 1.0, 2.0}, {0, 0, 1, 0, 1, 1}, 2);
    if (kind == "line") {
        std::vector<double> ts, vals;
        for (int i = 0; i <= 64; ++i) {
            ts.push_back(i / 64.0);
            vals.push_back(i / 64.0);
            vals.push_back(i / 64.0);
        }
        return SamplePath(ts, vals, 2);
    }
    if (kind == "circle") {
        const int n = 256;
        std::vector<double> ts, vals;
        for (int i = 0; i <= n; ++i) {
            const double th = 2.0 * M_PI * i / n;
            ts.push_back(i / double(n));
            vals.push_back(std::cos(th));
            vals.push_back(std::sin(th));
        }
        return SamplePath(ts, vals, 2);
    }
    throw ValidationError("/path/kind: unknown built-in path '" + kind + "'");
}

SamplePath path_from_config(const Config& cfg) {
    if (cfg.data.contains(json::json_pointer("/path/file")))
        return io::read_sample_path_csv_file(cfg.require<std::string>("/path/file"));
    return builtin_path(cfg.get<std::string>("/path/kind", "square_corner"));
}

area::ScanConfig scan_config(const Config& cfg) {
    area::ScanConfig sc;
    sc.spacing = cfg.get<double>("/scan/spacing", 0.125);
    sc.xi_max = cfg.get<double>("/grid/xi_max", 256.0);
    sc.n_modes = cfg.get<int>("/grid/n_modes", 2048);
    sc.window_s = cfg.get<double>("/scan/window_s", 0.3);
    sc.window_h = cfg.get<double>("/scan/window_h", 1.0);
    sc.workers = worker_count();
    return sc;
}

qft::ModelParams model_from_config(const Config& cfg, bool require_window) {
    try {
        return qft::make_model_params(cfg.get<double>("/alpha", 0.2),
                                      cfg.get<double>("/model/lambda", 0.1),
                                      cfg.get<double>("/model/M", 2.0),
                                      cfg.get<int>("/model/rho", 10), require_window);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("/model: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// subcommand bodies

void run_simulate(const Config& cfg, OutputSet& out, bool dry) {
    const auto alpha = alpha_from_config(cfg);
    const auto grid = grid_from_config(cfg);
    const int d = cfg.get<int>("/components", 1);
    const auto seed = cfg.get<std::uint64_t>("/mc/base_seed", 1);
    const auto times = uniform_times(cfg.get<double>("/times/t0", 0.0),
                                     cfg.get<double>("/times/t1", 1.0),
                                     cfg.get<int>("/times/samples", 256));
    if (d < 1) throw ValidationError("/components: must be >= 1");
    if (dry) return;

    const auto noise = gauss::sample_spectral_noise(grid, d, seed);
    SamplePath path = [&] {
        if (cfg.get<bool>("/tail/enabled", true)) {
            const auto tail = gauss::sample_spectral_tail(
                grid.xi_max, cfg.get<double>("/tail/xi_end", 1e9),
                cfg.get<int>("/tail/per_octave", 16), d, seed, alpha);
            return gauss::fbm_from_spectrum(noise, tail, times, alpha);
        }
        return gauss::fbm_from_spectrum(noise, times, alpha);
    }();
    out.write_stream("path.csv", [&](std::ostream& os) { io::write_sample_path_csv(path, os); });
    out.write_text("field.json", io::spectral_field_to_json(noise) + "\n");
}

void run_covariance(const Config& cfg, OutputSet& out, bool dry) {
    const auto alpha = alpha_from_config(cfg);
    const auto times = uniform_times(cfg.get<double>("/times/t0", 0.0),
                                     cfg.get<double>("/times/t1", 2.0),
                                     cfg.get<int>("/times/samples", 16));
    if (dry) return;
    out.write_stream("covariance.csv", [&](std::ostream& os) {
        os << "s,t,cov\n";
        for (double s : times)
            for (double t : times)
                os << io::format_double(s) << "," << io::format_double(t) << ","
                   << io::format_double(gauss::fbm_covariance(s, t, alpha)) << "\n";
    });
}

void run_scales(const Config& cfg, OutputSet& out, bool dry) {
    const auto grid = grid_from_config(cfg);
    gauss::CutoffSpec cutoff = [&] {
        try {
            return gauss::CutoffSpec(cfg.get<double>("/model/M", 2.0),
                                     cfg.get<int>("/model/rho", 3));
        } catch (const std::invalid_argument& e) {
            throw ValidationError(std::string("/model: ") + e.what());
        }
    }();
    if (grid.xi_max < std::pow(cutoff.M, cutoff.rho))
        throw ValidationError("/grid/xi_max: must cover M^rho");
    if (dry) return;

    const auto noise =
        gauss::sample_spectral_noise(grid, 1, cfg.get<std::uint64_t>("/mc/base_seed", 1));
    const auto slices = gauss::decompose_scales(noise, cutoff);
    out.write_stream("scales.csv", [&](std::ostream& os) {
        os << "xi";
        for (std::size_t j = 0; j < slices.size(); ++j) os << ",chi_" << j;
        os << ",sum,cutoff_multiplier\n";
        for (int k = 0; k < grid.n_modes; ++k) {
            const double xi = grid.mode(k);
            os << io::format_double(xi);
            double sum = 0.0;
            for (int j = 0; j <= cutoff.rho; ++j) {
                const double c = cutoff.chi_j(j, xi);
                sum += c;
                os << "," << io::format_double(c);
            }
            os << "," << io::format_double(sum) << ","
               << io::format_double(cutoff.cutoff_multiplier(xi)) << "\n";
        }
    });
}

void run_wick(const Config& cfg, OutputSet& out, bool dry) {
    const auto cov = cfg.require<std::vector<std::vector<double>>>("/cov");
    const auto indices = cfg.require<std::vector<int>>("/indices");
    if (indices.size() % 2 != 0) throw ValidationError("/indices: need an even count");
    if (dry) return;
    json j;
    j["value"] = gauss::wick_moment(cov, indices);
    out.write_text("wick.json", j.dump(2) + "\n");
}

void run_levy_area(const Config& cfg, OutputSet& out, bool dry) {
    const auto alpha = alpha_from_config(cfg);
    const auto grid = grid_from_config(cfg);
    const double s = cfg.get<double>("/window/s", 0.3);
    const double t = cfg.get<double>("/window/t", 1.3);
    if (!(s < t)) throw ValidationError("/window: need s < t");
    const int samples = cfg.get<int>("/times/samples", 4096);
    if (dry) return;

    const auto seed = cfg.get<std::uint64_t>("/mc/base_seed", 1);
    auto [n1, n2] = split_two(gauss::sample_spectral_noise(grid, 2, seed));
    const auto dec = area::decompose_area(n1, n2, s, t, alpha);

    const auto times = uniform_times(0.0, t + 0.5, samples);
    const SamplePath p1 = gauss::fbm_from_spectrum(n1, times, alpha);
    const SamplePath p2 = gauss::fbm_from_spectrum(n2, times, alpha);
    std::vector<double> vals(times.size() * 2);
    for (std::size_t i = 0; i < times.size(); ++i) {
        vals[2 * i] = p1.value(i, 0);
        vals[2 * i + 1] = p2.value(i, 0);
    }
    const SamplePath both(times, vals, 2, alpha.alpha, seed);

    json j;
    j["s"] = s;
    j["t"] = t;
    j["levy_area_discrete"] = area::levy_area_discrete(both, s, t);
    j["iterated_integral_discrete"] = area::iterated_integral_discrete(both, s, t);
    j["a_plus_increment"] = dec.a_plus_increment;
    j["a_minus_increment"] = dec.a_minus_increment;
    j["boundary"] = dec.boundary;
    j["reconstruction"] = dec.reconstruct();
    out.write_text("levy_area.json", j.dump(2) + "\n");
}

void run_sectors(const Config& cfg, OutputSet& out, bool dry) {
    const auto alpha = alpha_from_config(cfg);
    const auto grid = grid_from_config(cfg);
    const double t = cfg.get<double>("/window/t", 1.0);
    const int replicates = cfg.get<int>("/mc/replicates", 16);
    if (replicates < 1) throw ValidationError("/mc/replicates: must be >= 1");
    if (dry) return;
    const auto base = cfg.get<std::uint64_t>("/mc/base_seed", 1);
    out.write_stream("sectors.csv", [&](std::ostream& os) {
        os << "seed,a_plus,a_minus\n";
        for (int r = 0; r < replicates; ++r) {
            auto [n1, n2] = split_two(gauss::sample_spectral_noise(grid, 2, base + r));
            os << (base + r) << ","
               << io::format_double(
                      area::skeleton_area_sector(n1, n2, area::Sector::plus, t, alpha))
               << ","
               << io::format_double(
                      area::skeleton_area_sector(n1, n2, area::Sector::minus, t, alpha))
               << "\n";
        }
    });
}

area::ScanQuantity parse_quantity(const std::string& q) {
    if (q == "a_plus") return area::ScanQuantity::a_plus;
    if (q == "a_minus") return area::ScanQuantity::a_minus;
    if (q == "boundary") return area::ScanQuantity::boundary;
    if (q == "full_area") return area::ScanQuantity::full_area;
    throw ValidationError("/scan/quantity: unknown quantity '" + q + "'");
}

void run_variance_scan(const Config& cfg, OutputSet& out, bool dry) {
    const auto alpha = alpha_from_config(cfg);
    const auto quantity = parse_quantity(cfg.get<std::string>("/scan/quantity", "a_plus"));
    const std::string kind_s = cfg.get<std::string>("/scan/control", "cutoff");
    if (kind_s != "cutoff" && kind_s != "increment")
        throw ValidationError("/scan/control: must be 'cutoff' or 'increment'");
    const auto kind = kind_s == "cutoff" ? area::ControlKind::cutoff
                                         : area::ControlKind::increment;
    const auto controls = cfg.require<std::vector<double>>("/scan/controls");
    const int replicates = cfg.get<int>("/mc/replicates", 400);
    if (replicates < 100) throw ValidationError("/mc/replicates: scans need >= 100");
    if (controls.size() < 3) throw ValidationError("/scan/controls: need >= 3 values");
    for (std::size_t i = 1; i < controls.size(); ++i)
        if (!(controls[i] > controls[i - 1]))
            throw ValidationError("/scan/controls: must be strictly increasing");
    if (dry) return;

    const auto scan =
        area::variance_scan(quantity, alpha, controls, kind, replicates,
                            cfg.get<std::uint64_t>("/mc/base_seed", 1), scan_config(cfg));
    out.write_stream("scan.csv", [&](std::ostream& os) { io::write_scan_csv(scan, os); });
    out.write_text("scan.json", io::scan_sidecar_json(scan) + "\n");
}

void run_holder(const Config& cfg, OutputSet& out, bool dry) {
    const auto alpha = alpha_from_config(cfg);
    const auto grid = grid_from_config(cfg);
    const int samples = cfg.get<int>("/times/samples", 1 << 14);
    if (samples < 64) throw ValidationError("/times/samples: need >= 64");
    if (dry) return;
    const auto seed = cfg.get<std::uint64_t>("/mc/base_seed", 1);
    const auto noise = gauss::sample_spectral_noise(grid, 1, seed);
    const auto tail = gauss::sample_spectral_tail(
        grid.xi_max, cfg.get<double>("/tail/xi_end", 1e9),
        cfg.get<int>("/tail/per_octave", 32), 1, seed, alpha);
    const auto path = gauss::fbm_from_spectrum(
        noise, tail, uniform_times(0.0, cfg.get<double>("/times/t1", 1.0), samples), alpha);
    json j;
    j["alpha"] = alpha.alpha;
    j["estimate"] = area::holder_exponent_estimate(path);
    out.write_text("holder.json", j.dump(2) + "\n");
}

void run_signature(const Config& cfg, OutputSet& out, bool dry) {
    const int depth = cfg.get<int>("/depth", 4);
    if (depth < 1 || depth > 6) throw ValidationError("/depth: must be in 1..6");
    const SamplePath path = path_from_config(cfg);
    if (dry) return;
    out.write_text("signature.json",
                   io::signature_to_json(algebra::signature(path, depth)) + "\n");
}

void run_chen_check(const Config& cfg, OutputSet& out, bool dry) {
    const double alpha = cfg.get<double>("/alpha", 0.3);
    const SamplePath path = path_from_config(cfg);
    if (path.size() < 3) throw ValidationError("/path: need at least 3 samples");
    if (dry) return;
    const auto functional = [&path](double s, double t, const algebra::Word& w) {
        return algebra::signature(path, s, t, static_cast<int>(w.size())).coeff(w);
    };
    std::vector<double> ts;
    const int m = static_cast<int>(std::min<std::size_t>(path.size(), 9));
    for (int i = 0; i < m; ++i)
        ts.push_back(path.times[i * (path.size() - 1) / (m - 1)]);
    const auto report =
        algebra::validate_rough_path(functional, alpha, ts, path.dimension());
    json j;
    j["max_chen_violation"] = report.max_chen_violation;
    j["max_shuffle_violation"] = report.max_shuffle_violation;
    j["depth"] = report.depth;
    j["holder_ratios"] = report.holder_ratios;
    out.write_text("chen_check.json", j.dump(2) + "\n");
}

void run_shuffle_check(const Config& cfg, OutputSet& out, bool dry) {
    const int depth = cfg.get<int>("/depth", 4);
    if (depth < 2 || depth > 6) throw ValidationError("/depth: must be in 2..6");
    const SamplePath path = path_from_config(cfg);
    if (dry) return;
    json j;
    j["max_shuffle_violation"] = algebra::check_shuffle(algebra::signature(path, depth));
    out.write_text("shuffle_check.json", j.dump(2) + "\n");
}

void run_heisenberg(const Config& cfg, OutputSet& out, bool dry) {
    const auto g1v = cfg.get<std::vector<double>>("/g1", {1.0, 0.0, 0.0});
    const auto g2v = cfg.get<std::vector<double>>("/g2", {0.0, 1.0, 0.0});
    if (g1v.size() != 3 || g2v.size() != 3)
        throw ValidationError("/g1,/g2: need 3 exponential coordinates each");
    if (dry) return;
    const algebra::HeisenbergElement g1{g1v[0], g1v[1], g1v[2]};
    const algebra::HeisenbergElement g2{g2v[0], g2v[1], g2v[2]};
    const auto p12 = algebra::heisenberg_product(g1, g2);
    const auto p21 = algebra::heisenberg_product(g2, g1);
    json j;
    j["g1_g2"] = {p12.x, p12.y, p12.z};
    j["g2_g1"] = {p21.x, p21.y, p21.z};
    j["commutator_z"] = p12.z - p21.z;
    out.write_text("heisenberg.json", j.dump(2) + "\n");
}

void run_rde_solve(const Config& cfg, OutputSet& out, bool dry) {
    const int rank = cfg.get<int>("/rank", 2);
    if (rank < 1 || rank > 4) throw ValidationError("/rank: must be in 1..4");
    const int steps = cfg.get<int>("/steps", 64);
    if (steps < 1) throw ValidationError("/steps: must be >= 1");
    const double t1 = cfg.get<double>("/times/t1", 2.0);

    const std::string system = cfg.get<std::string>("/system", "so3_rotation");
    rde::VectorFieldSystem vfs = [&] {
        if (system == "so3_rotation") {
            return rde::VectorFieldSystem::linear(
                {{0, 0, 0, 0, 0, -1, 0, 1, 0}, {0, 0, 1, 0, 0, 0, -1, 0, 0}}, 3);
        }
        if (system == "linear") {
            const auto mats = cfg.require<std::vector<std::vector<double>>>("/matrices");
            const int dim = cfg.require<int>("/state_dim");
            try {
                return rde::VectorFieldSystem::linear(mats, dim);
            } catch (const std::invalid_argument& e) {
                throw ValidationError(std::string("/matrices: ") + e.what());
            }
        }
        throw ValidationError("/system: unknown system '" + system + "'");
    }();

    auto y0 = cfg.get<std::vector<double>>("/y0", {});
    if (y0.empty()) {
        y0.assign(vfs.state_dim, 0.0);
        y0[0] = 1.0;
    }
    if (static_cast<int>(y0.size()) != vfs.state_dim)
        throw ValidationError("/y0: dimension mismatch");

    const std::string driver_kind = cfg.get<std::string>("/driver", "smooth_sin");
    rde::Driver driver = [&] {
        if (driver_kind == "smooth_sin")
            return rde::Driver::from_smooth(
                [](double t) { return std::vector<double>{1.0, std::cos(t)}; }, 2, 64);
        if (driver_kind == "path") {
            SamplePath p = path_from_config(cfg);
            return rde::Driver::from_path(std::move(p));
        }
        throw ValidationError("/driver: unknown driver '" + driver_kind + "'");
    }();
    if (driver.dimension() != vfs.d) throw ValidationError("/driver: dimension mismatch");
    if (dry) return;

    const auto partition = uniform_times(0.0, t1, steps);
    const auto traj = rde::solve(vfs, driver, partition, y0, rank);
    out.write_stream("trajectory.csv",
                     [&](std::ostream& os) { io::write_trajectory_csv(partition, traj, os); });
}

void run_power_count(const Config& cfg, OutputSet& out, bool dry) {
    const auto alpha = alpha_from_config(cfg);
    const int v_max = cfg.get<int>("/v_max", 6);
    if (v_max < 1 || v_max > 8) throw ValidationError("/v_max: must be in 1..8");
    if (dry) return;
    const auto table = qft::enumerate_leg_structures(v_max, alpha);
    out.write_stream("power_count.csv", [&](std::ostream& os) {
        os << "n_sigma,n_phi,n_dphi,degree,divergent_flag\n";
        for (const auto& s : table)
            os << s.legs.n_sigma << "," << s.legs.n_phi << "," << s.legs.n_dphi << ","
               << io::format_double(s.degree) << "," << (s.divergent ? 1 : 0) << "\n";
    });
}

void run_bubble(const Config& cfg, OutputSet& out, bool dry) {
    const auto params = model_from_config(cfg, false);
    const double xi = cfg.get<double>("/xi", 1.0);
    const auto cutoffs = cfg.get<std::vector<double>>("/cutoffs", {64.0, 256.0, 1024.0, 4096.0});
    if (xi == 0.0) throw ValidationError("/xi: must be nonzero");
    for (double c : cutoffs)
        if (!(c > std::abs(xi))) throw ValidationError("/cutoffs: must exceed |xi|");
    if (dry) return;
    out.write_stream("bubble.csv", [&](std::ostream& os) {
        os << "cutoff,value,amputated\n";
        for (double c : cutoffs)
            os << io::format_double(c) << ","
               << io::format_double(qft::bubble_integral(xi, c, params)) << ","
               << io::format_double(qft::bubble_integral(xi, c, params, true)) << "\n";
    });
    json j;
    j["measured_K"] = qft::measured_bubble_constant(params.alpha);
    out.write_text("bubble.json", j.dump(2) + "\n");
}

void run_bubble_series(const Config& cfg, OutputSet& out, bool dry) {
    const double K = cfg.get<double>("/model/K", 1.0);
    const double xi = cfg.get<double>("/xi", 1.0);
    const auto rhos = cfg.get<std::vector<int>>("/rhos", {0, 10, 20, 40, 80});
    if (!(K > 0.0)) throw ValidationError("/model/K: must be > 0");
    if (dry) return;
    out.write_stream("bubble_series.csv", [&](std::ostream& os) {
        os << "rho,value,renormalized_covariance,mass\n";
        for (int rho : rhos) {
            Config c2;
            c2.data = cfg.data;
            c2.set("/model/rho", rho);
            const auto params = model_from_config(c2, false);
            const auto cov = qft::SigmaCovariance::renormalized(params, K);
            os << rho << "," << io::format_double(qft::bubble_series_sum(xi, params, K))
               << "," << io::format_double(qft::renormalized_sigma_covariance(xi, cov))
               << "," << io::format_double(cov.mass) << "\n";
        }
    });
}

void run_sd_spectrum(const Config& cfg, OutputSet& out, bool dry) {
    const auto params = model_from_config(cfg, false);
    const double K = cfg.get<double>("/model/K", 1.0);
    const double K_pp = cfg.get<double>("/model/K_pp", 0.5 * K);
    const auto xis = cfg.get<std::vector<double>>("/xis", {0.5, 1.0, 2.0, 4.0});
    if (!(K > 0.0)) throw ValidationError("/model/K: must be > 0");
    if (const auto warning = qft::validate_mixed_constant(K, K_pp))
        std::cerr << "warning: " << *warning << "\n";
    if (dry) return;
    out.write_stream("sd_spectrum.csv", [&](std::ostream& os) {
        os << "xi,sd_route,bubble_series,mixed,free_limit\n";
        const auto cov = qft::SigmaCovariance::renormalized(params, K);
        for (double xi : xis) {
            const double sd = qft::schwinger_dyson_area_spectrum(
                qft::renormalized_sigma_covariance(xi, cov), xi, params);
            os << io::format_double(xi) << "," << io::format_double(sd) << ","
               << io::format_double(qft::bubble_series_sum(xi, params, K)) << ","
               << io::format_double(qft::mixed_area_spectrum(xi, params, K_pp)) << ","
               << io::format_double(std::pow(std::abs(xi), 1.0 - 4.0 * params.alpha.alpha) /
                                    (params.lambda * params.lambda))
               << "\n";
        }
    });
}

void run_area_variance(const Config& cfg, OutputSet& out, bool dry) {
    const auto params = model_from_config(cfg, false);
    const double s = cfg.get<double>("/window/s", 0.3);
    const auto hs = cfg.get<std::vector<double>>("/increments", {0.25, 0.5, 1.0});
    qft::BoundaryMcOptions mc;
    mc.xi_max = cfg.get<double>("/grid/xi_max", 256.0);
    mc.n_modes = cfg.get<int>("/grid/n_modes", 2048);
    mc.replicates = cfg.get<int>("/mc/replicates", 300);
    mc.base_seed = cfg.get<std::uint64_t>("/mc/base_seed", 1);
    for (double h : hs)
        if (!(h > 0.0)) throw ValidationError("/increments: must be positive");
    if (mc.replicates < 1) throw ValidationError("/mc/replicates: must be >= 1");
    if (dry) return;
    out.write_stream("area_variance.csv", [&](std::ostream& os) {
        os << "h,total,quadrature_part,boundary_part,K1,K2_estimate\n";
        for (double h : hs) {
            const auto v = qft::interacting_area_increment_variance(s, s + h, params, mc);
            os << io::format_double(h) << "," << io::format_double(v.total) << ","
               << io::format_double(v.quadrature_part) << ","
               << io::format_double(v.boundary_part) << "," << io::format_double(v.K1)
               << "," << io::format_double(v.K2_estimate) << "\n";
        }
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"roughlab: fBm spectral simulation, Levy-area sector analysis, rough-path "
                 "algebra, rank-N Euler schemes, and perturbative power counting"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string prefix = "run";
    bool dry_run = false;
    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--prefix", prefix, "artifact filename prefix");
    app.add_flag("--dry-run", dry_run, "validate configuration without computing");

    // flag overrides for the most common keys; precedence flags > config > defaults
    std::optional<double> opt_alpha, opt_xi_max, opt_lambda;
    std::optional<int> opt_n_modes, opt_replicates, opt_rho, opt_v_max;
    std::optional<std::uint64_t> opt_seed;
    app.add_option("--alpha", opt_alpha, "Hurst index");
    app.add_option("--xi-max", opt_xi_max, "frequency cutoff");
    app.add_option("--n-modes", opt_n_modes, "modes per half-axis");
    app.add_option("--replicates", opt_replicates, "Monte-Carlo replicates");
    app.add_option("--seed", opt_seed, "base seed");
    app.add_option("--lambda", opt_lambda, "coupling");
    app.add_option("--rho", opt_rho, "bare scale");
    app.add_option("--v-max", opt_v_max, "max vertex count");

    struct Sub {
        const char* name;
        const char* desc;
        void (*fn)(const Config&, OutputSet&, bool);
    };
    const Sub subs[] = {
        {"simulate", "sample an fBm path from the spectral representation", run_simulate},
        {"covariance", "closed-form fBm covariance table", run_covariance},
        {"scales", "dyadic partition-of-unity slice multipliers", run_scales},
        {"wick", "Wick pairing moment of a covariance", run_wick},
        {"levy-area", "discrete Levy area and its sector decomposition", run_levy_area},
        {"sectors", "one-time sector skeleton samples", run_sectors},
        {"variance-scan", "Monte-Carlo variance scan with power-law fit", run_variance_scan},
        {"holder", "Holder exponent estimate of an fBm sample", run_holder},
        {"signature", "truncated signature of a path", run_signature},
        {"chen-check", "Chen/shuffle/Holder report for a path", run_chen_check},
        {"shuffle-check", "max shuffle violation of a path signature", run_shuffle_check},
        {"heisenberg", "Heisenberg group products", run_heisenberg},
        {"rde-solve", "rank-N Euler scheme trajectory", run_rde_solve},
        {"power-count", "divergence degrees of leg structures", run_power_count},
        {"bubble", "one-loop bubble vs cutoff", run_bubble},
        {"bubble-series", "resummed bubble series vs rho", run_bubble_series},
        {"sd-spectrum", "Schwinger-Dyson area spectrum routes", run_sd_spectrum},
        {"area-variance", "interacting area increment variance", run_area_variance},
    };
    for (const auto& sub : subs) app.add_subcommand(sub.name, sub.desc)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    Config cfg;
    try {
        if (!config_path.empty()) cfg.merge_file(config_path);
        if (opt_alpha) cfg.set("/alpha", *opt_alpha);
        if (opt_xi_max) cfg.set("/grid/xi_max", *opt_xi_max);
        if (opt_n_modes) cfg.set("/grid/n_modes", *opt_n_modes);
        if (opt_replicates) cfg.set("/mc/replicates", *opt_replicates);
        if (opt_seed) cfg.set("/mc/base_seed", *opt_seed);
        if (opt_lambda) cfg.set("/model/lambda", *opt_lambda);
        if (opt_rho) cfg.set("/model/rho", *opt_rho);
        if (opt_v_max) cfg.set("/v_max", *opt_v_max);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    }

    for (const auto& sub : subs) {
        if (!app.got_subcommand(sub.name)) continue;
        OutputSet out(out_dir, prefix + "_" + std::string(sub.name) + "_", dry_run);
        try {
            sub.fn(cfg, out, dry_run);
            if (!dry_run)
                out.write_manifest(sub.name, cfg, cfg.get<std::uint64_t>("/mc/base_seed", 1));
            return 0;
        } catch (const ValidationError& e) {
            out.discard_all();
            std::cerr << "validation error: " << e.what() << "\n";
            return 2;
        } catch (const std::invalid_argument& e) {
            out.discard_all();
            std::cerr << "validation error: " << e.what() << "\n";
            return 2;
        } catch (const std::exception& e) {
            out.discard_all();
            std::cerr << "numerical failure: " << e.what() << "\n";
            return 3;
        }
    }
    return 2;
}
