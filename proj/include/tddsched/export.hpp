#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tddsched/sim.hpp"
#include "tddsched/sweep.hpp"

namespace tddsched {

inline constexpr int kSchemaVersion = 1;

// Shortest round-trip decimal form ("nan", "inf" for non-finite values).
std::string format_double(double v);

// Serialise results. CSV starts with '#' comment lines (units, config hash);
// JSON carries schema_version, config_hash, columns and rows. Empty tables
// are refused with ValidationError.
std::string table_to_csv(const ResultTable& table);
std::string table_to_json(const ResultTable& table);

// `format` is "csv" or "json". Throws IoError when the path cannot be written.
void write_table(const ResultTable& table, std::string_view format, const std::filesystem::path& path);

// Reads a file written by write_table (format detected from content).
ResultTable read_table(const std::filesystem::path& path);
ResultTable parse_table(std::string_view text);

using CdfPoints = std::vector<std::pair<double, double>>;
std::string cdf_to_csv(const CdfPoints& cdf, std::string_view config_hash);
std::string cdf_to_json(const CdfPoints& cdf, std::string_view config_hash);
void write_cdf(const CdfPoints& cdf, std::string_view config_hash, std::string_view format,
               const std::filesystem::path& path);

// Per-TTI CSV log: decision, delivered bits per class and the allocation.
class TraceWriter {
 public:
  TraceWriter(const std::filesystem::path& path, std::string_view config_hash, double tau,
              double bandwidth);
  void operator()(const TtiClock& clock, const TtiDecision& d, std::span<const Service> services,
                  std::span<const double> sinr);

 private:
  std::ofstream out_;
  double tau_;
  double bandwidth_;
};

}  // namespace tddsched
