#include "roughlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace roughlab::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_sample_path_csv(const SamplePath& path, std::ostream& os) {
    os << "t";
    for (int c = 1; c <= path.dimension(); ++c) os << ",x_" << c;
    os << "\n";
    for (std::size_t i = 0; i < path.size(); ++i) {
        os << format_double(path.times[i]);
        for (int c = 0; c < path.dimension(); ++c)
            os << "," << format_double(path.value(i, c));
        os << "\n";
    }
}

SamplePath read_sample_path_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("sample path CSV: empty file");
    int d = -1;  // from header: t,x_1..x_d
    {
        int commas = 0;
        for (char ch : line)
            if (ch == ',') ++commas;
        d = commas;
    }
    if (d < 1) throw std::runtime_error("sample path CSV: bad header");
    std::vector<double> times, values;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            const double v = std::strtod(cell.c_str(), nullptr);
            if (col == 0)
                times.push_back(v);
            else
                values.push_back(v);
            ++col;
        }
        if (col != d + 1) throw std::runtime_error("sample path CSV: ragged row");
    }
    return SamplePath(std::move(times), std::move(values), d);
}

void write_sample_path_csv_file(const SamplePath& path, const std::string& filename) {
    std::ofstream os(filename);
    if (!os) throw std::runtime_error("cannot open " + filename);
    write_sample_path_csv(path, os);
}

SamplePath read_sample_path_csv_file(const std::string& filename) {
    std::ifstream is(filename);
    if (!is) throw std::runtime_error("cannot open " + filename);
    return read_sample_path_csv(is);
}

std::string spectral_field_to_json(const gauss::SpectralField& field) {
    json j;
    j["grid"]["xi_max"] = field.grid.xi_max;
    j["grid"]["n_modes"] = field.grid.n_modes;
    j["components"] = field.components;
    json amps = json::array();
    for (const auto& a : field.amps) amps.push_back({a.real(), a.imag()});
    j["amplitudes"] = std::move(amps);
    return j.dump();
}

gauss::SpectralField spectral_field_from_json(const std::string& text) {
    const json j = json::parse(text);
    gauss::FrequencyGrid grid(j.at("grid").at("xi_max").get<double>(),
                              j.at("grid").at("n_modes").get<int>());
    gauss::SpectralField field(grid, j.at("components").get<int>());
    const auto& amps = j.at("amplitudes");
    if (amps.size() != field.amps.size())
        throw std::runtime_error("spectral field JSON: amplitude count mismatch");
    for (std::size_t i = 0; i < field.amps.size(); ++i)
        field.amps[i] = {amps[i][0].get<double>(), amps[i][1].get<double>()};
    return field;
}

std::string signature_to_json(const algebra::TruncatedSignature& sig) {
    json j;
    j["d"] = sig.d;
    j["depth"] = sig.depth;
    j["levels"] = sig.levels;  // flattened row-major per level
    return j.dump();
}

algebra::TruncatedSignature signature_from_json(const std::string& text) {
    const json j = json::parse(text);
    algebra::TruncatedSignature sig(j.at("d").get<int>(), j.at("depth").get<int>());
    const auto& levels = j.at("levels");
    if (levels.size() != sig.levels.size())
        throw std::runtime_error("signature JSON: level count mismatch");
    for (std::size_t n = 0; n < sig.levels.size(); ++n) {
        const auto lvl = levels[n].get<std::vector<double>>();
        if (lvl.size() != sig.levels[n].size())
            throw std::runtime_error("signature JSON: level size mismatch");
        sig.levels[n] = lvl;
    }
    return sig;
}

void write_scan_csv(const area::ScanResult& scan, std::ostream& os) {
    os << "control,estimate,mc_error\n";
    for (const auto& p : scan.points)
        os << format_double(p.control) << "," << format_double(p.estimate) << ","
           << format_double(p.mc_error) << "\n";
}

std::string scan_sidecar_json(const area::ScanResult& scan) {
    json j;
    j["fitted_exponent"] = scan.fitted_exponent;
    j["fit_stderr"] = scan.fit_stderr;
    j["r_squared"] = scan.r_squared;
    j["metadata"]["alpha"] = scan.alpha;
    j["metadata"]["base_seed"] = scan.base_seed;
    j["metadata"]["replicates"] = scan.replicates;
    j["metadata"]["grid"]["spacing"] = scan.grid_spacing;
    j["metadata"]["grid"]["xi_max"] = scan.grid_xi_max;
    return j.dump(2);
}

void write_trajectory_csv(const std::vector<double>& times,
                          const std::vector<std::vector<double>>& states,
                          std::ostream& os) {
    if (times.size() != states.size())
        throw std::invalid_argument("trajectory CSV: size mismatch");
    os << "t";
    if (!states.empty())
        for (std::size_t c = 1; c <= states[0].size(); ++c) os << ",y_" << c;
    os << "\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        os << format_double(times[i]);
        for (double v : states[i]) os << "," << format_double(v);
        os << "\n";
    }
}

}  // namespace roughlab::io
