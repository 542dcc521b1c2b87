#pragma once

#include <iosfwd>
#include <string>

#include "roughlab/area_analysis.hpp"
#include "roughlab/gaussian_field.hpp"
#include "roughlab/rough_algebra.hpp"
#include "roughlab/sample_path.hpp"

// Text serialization.  Doubles are written with 17 significant digits so all
// finite values round-trip bit-exactly.

namespace roughlab::io {

std::string format_double(double v);

void write_sample_path_csv(const SamplePath& path, std::ostream& os);
SamplePath read_sample_path_csv(std::istream& is);
void write_sample_path_csv_file(const SamplePath& path, const std::string& filename);
SamplePath read_sample_path_csv_file(const std::string& filename);

std::string spectral_field_to_json(const gauss::SpectralField& field);
gauss::SpectralField spectral_field_from_json(const std::string& text);

std::string signature_to_json(const algebra::TruncatedSignature& sig);
algebra::TruncatedSignature signature_from_json(const std::string& text);

void write_scan_csv(const area::ScanResult& scan, std::ostream& os);
std::string scan_sidecar_json(const area::ScanResult& scan);

// Trajectory CSV: t, y_1..y_state_dim.
void write_trajectory_csv(const std::vector<double>& times,
                          const std::vector<std::vector<double>>& states,
                          std::ostream& os);

}  // namespace roughlab::io
