#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mde/bench.hpp"
#include "mde/encoders.hpp"
#include "mde/probe.hpp"

namespace mde::cli {

using json = nlohmann::json;

/// Everything a subcommand needs. Every field carries its default here and
/// the whole struct is echoed into each JSON report.
struct RunConfig {
  std::string subcommand;
  std::vector<std::string> datasets;
  /// CSV label column, a name or a 0-based index; empty means the last column.
  std::string label;
  std::string encoder = "retire";
  double l = kDefaultLower;
  double u = kDefaultUpper;
  Size size = kDefaultCanvas;
  std::uint64_t seed = 0;
  std::string out = ".";
  unsigned jobs = 1;
  std::size_t igtd_iters = 1000;
  std::size_t igtd_patience = 3;
  std::vector<std::size_t> grid{10, 25, 50, 100, 200, 350, 500};
  std::size_t samples = 100;
  std::size_t repeats = 100;
  double budget_secs = 120.0;
  int channels = 1;
  std::string model;
  /// Row selection for encode, e.g. "0-4,9"; empty selects every row.
  std::string rows;
  std::vector<std::string> reports;
  double alpha = 0.05;

  EncoderParams encoder_params() const;
};

json config_json(const RunConfig& cfg);

/// "224x224" -> {224, 224}; throws ParameterError on anything else.
Size parse_size(const std::string& text);
/// "0-4,9" -> {0,1,2,3,4,9}, each index checked against n_rows.
std::vector<std::size_t> parse_rows(const std::string& text, std::size_t n_rows);

Dataset load_input(const RunConfig& cfg, const std::string& path);

/// Each returns the path it wrote.
std::filesystem::path cmd_fit(const RunConfig& cfg);
std::vector<std::filesystem::path> cmd_encode(const RunConfig& cfg);
std::filesystem::path cmd_eval(const RunConfig& cfg);
std::filesystem::path cmd_stats(const RunConfig& cfg, std::ostream& table);
std::filesystem::path cmd_bench(const RunConfig& cfg, std::ostream& summary);

/// Side-by-side comparison of several methods over several datasets.
/// Methods keep first-appearance order; every dataset must have a report
/// for every method.
json build_stats_report(const std::vector<EvalReport>& reports, double alpha);
void print_stats_table(const json& report, std::ostream& os);

/// Parses argv and dispatches. Returns 0 on success, 2 on usage or
/// validation errors, 1 on anything unexpected.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mde::cli
