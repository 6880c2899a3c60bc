#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mde/data.hpp"
#include "mde/raster.hpp"
#include "mde/scaling.hpp"

namespace mde {

enum class EncoderKind { Retire, Stml, Igtd };

std::string_view to_string(EncoderKind kind) noexcept;
/// Accepts "retire", "stml", "igtd" (case-insensitive); throws ParameterError otherwise.
EncoderKind parse_encoder_kind(std::string_view name);

struct Size {
  int width = 224;
  int height = 224;
  bool operator==(const Size&) const = default;
};

inline constexpr Size kDefaultCanvas{224, 224};

/// Pixel rectangle [x, x + w) x [y, y + h).
struct CellRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
};

/// STML layout: a near-square grid, one cell per feature in row-major order.
/// The last row and column absorb the integer-division remainder.
struct StmlGrid {
  int rows = 0;
  int cols = 0;
  int cell_w = 0;
  int cell_h = 0;
  Size size;
  std::size_t n = 0;

  CellRect cell(std::size_t feature) const noexcept;
  bool operator==(const StmlGrid&) const = default;
};

StmlGrid make_stml_grid(std::size_t n_features, Size size);

/// Feature-to-pixel assignment found by the IGTD search.
struct IgtdMapping {
  int rows = 0;
  int cols = 0;
  /// assignment[f] is the row-major cell index of feature f, a permutation
  /// of 0..n-1; cells n..rows*cols-1 stay blank.
  std::vector<std::size_t> assignment;
  /// Objective after initialization and after every scan.
  std::vector<double> error_trace;
  std::size_t scans = 0;
  std::size_t swaps = 0;
  bool truncated = false;

  double final_error() const { return error_trace.empty() ? 0.0 : error_trace.back(); }
  bool operator==(const IgtdMapping&) const = default;
};

struct IgtdOptions {
  std::size_t max_iters = 1000;
  std::size_t patience = 3;
  std::uint64_t seed = 0;
  /// Wall-clock limit for the search in seconds; 0 disables it.
  double budget_secs = 0.0;
  /// Called after every scan with the current assignment and the tracked
  /// objective (doubled, so it is an exact integer).
  std::function<void(std::span<const std::size_t>, std::int64_t)> observer;
};

/// Grid for n features: cols = ceil(sqrt(n)), rows = ceil(n / cols).
std::pair<int, int> igtd_grid(std::size_t n_features);

/// Rank matrices for the IGTD objective. Ranks are average ranks of the
/// n(n-1)/2 pairwise distances, stored doubled so they stay integral.
struct IgtdProblem {
  std::size_t n = 0;
  int rows = 0;
  int cols = 0;
  std::vector<std::int64_t> feature_rank;  // n x n, symmetric
  std::vector<std::int64_t> pixel_rank;    // n x n over the first n cells

  /// sum_{i<j} |feature_rank(i,j) - pixel_rank(a_i, a_j)|, which is twice
  /// the objective in ordinary rank units.
  std::int64_t doubled_error(std::span<const std::size_t> assignment) const;
};

/// Builds ranks from Euclidean distances between the columns of a scaled
/// training matrix and between cell centers.
IgtdProblem make_igtd_problem(const Matrix& scaled_train);

/// Swap hill climbing from the identity assignment. Each scan visits all
/// feature pairs in a seed-shuffled order and applies every swap that
/// strictly lowers the objective. Stops after `patience` consecutive scans
/// without improvement, after `max_iters` scans, or at once when the
/// objective is already zero.
IgtdMapping optimize_igtd(const IgtdProblem& problem, const IgtdOptions& options);

using EncoderLayout = std::variant<std::monostate, PolarLayout, StmlGrid, IgtdMapping>;

/// Fitted state of one encoder. A default or kind-only model is unfitted and
/// rejects encode calls.
struct EncoderModel {
  EncoderKind kind = EncoderKind::Retire;
  Size size = kDefaultCanvas;
  std::optional<ScalerParams> scaler;
  EncoderLayout layout;

  bool fitted() const noexcept { return scaler.has_value() && layout.index() != 0; }
  std::size_t n_features() const;

  bool operator==(const EncoderModel&) const = default;
};

struct EncoderParams {
  double l = kDefaultLower;
  double u = kDefaultUpper;
  Size size = kDefaultCanvas;
  IgtdOptions igtd;
};

EncoderModel fit_retire(const Dataset& train, double l = kDefaultLower, double u = kDefaultUpper,
                        Size size = kDefaultCanvas);
/// Filled radar silhouette of the scaled sample plus the unfilled
/// radius-1.0 regular polygon as a reference border.
Canvas encode_retire(const EncoderModel& model, std::span<const double> x);

EncoderModel fit_stml(const Dataset& train, Size size = kDefaultCanvas);
/// Each raw value printed with the embedded 5x7 font into its cell at the
/// largest integer scale that fits; text wider than its cell at scale 1 is clipped.
Canvas encode_stml(const EncoderModel& model, std::span<const double> x);

EncoderModel fit_igtd(const Dataset& train, const IgtdOptions& options = {},
                      double l = kDefaultLower, double u = kDefaultUpper);
/// One pixel per grid cell; feature f's cell holds round(255 * S(x_f)).
Canvas encode_igtd(const EncoderModel& model, std::span<const double> x);

EncoderModel fit_encoder(EncoderKind kind, const Dataset& train, const EncoderParams& params = {});
Canvas encode(const EncoderModel& model, std::span<const double> x);

/// Encodes every row of X, optionally across `jobs` worker threads. Output
/// order always matches row order.
std::vector<Canvas> encode_rows(const EncoderModel& model, const Matrix& X, unsigned jobs = 1);

}  // namespace mde
