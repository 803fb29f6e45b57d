#pragma once

// CSV ingestion and emission.
//
// Input: a header row of OD labels, then one row per time interval with
// comma-separated decimal fields. Output uses the shortest round-trip
// representation of each double so files are byte-stable across runs.

#include "tmrpca/traffic_matrix.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tmrpca {

TrafficMatrix parse_traffic_csv(std::istream& in, double interval_minutes,
                                std::string origin_label = {});
TrafficMatrix read_traffic_csv(const std::filesystem::path& path, double interval_minutes);

/// Reads a labelled real matrix without the nonnegativity rule (A, E, N files).
Matrix read_matrix_csv(const std::filesystem::path& path, std::vector<std::string>* labels = nullptr);

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels, const Matrix& m);
void write_matrix_csv(const std::filesystem::path& path, const std::vector<std::string>& labels,
                      const Matrix& m);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace tmrpca
