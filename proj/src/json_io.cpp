#include "mde/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mde/error.hpp"

namespace mde {

namespace {

constexpr const char* kModelFormat = "mde-encoder-model";
constexpr int kModelVersion = 1;

json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'", 0);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad field '") + key + "': " + e.what(), 0);
  }
}

}  // namespace

void to_json(json& j, const ScalerParams& p) {
  j = json{{"feature_names", p.feature_names},
           {"mins", p.mins},
           {"maxs", p.maxs},
           {"l", p.l},
           {"u", p.u},
           {"fit_fingerprint", hex64(p.fit_fingerprint)}};
}

void from_json(const json& j, ScalerParams& p) {
  p.feature_names = j.value("feature_names", std::vector<std::string>{});
  p.mins = field<std::vector<double>>(j, "mins");
  p.maxs = field<std::vector<double>>(j, "maxs");
  p.l = field<double>(j, "l");
  p.u = field<double>(j, "u");
  p.fit_fingerprint = std::stoull(j.value("fit_fingerprint", std::string("0")), nullptr, 16);
  if (p.mins.size() != p.maxs.size()) throw ParseError("scaler mins/maxs length mismatch", 0);
  if (!p.feature_names.empty() && p.feature_names.size() != p.mins.size()) {
    throw ParseError("scaler feature_names length mismatch", 0);
  }
  for (std::size_t f = 0; f < p.mins.size(); ++f) {
    if (!(p.mins[f] <= p.maxs[f])) throw ParseError("scaler has min > max", 0);
  }
  if (!(p.l >= 0.0 && p.u <= 1.0 && p.l < p.u)) throw ParseError("scaler bounds violate 0 <= l < u <= 1", 0);
}

void to_json(json& j, const PolarLayout& p) {
  j = json{{"cx", p.cx}, {"cy", p.cy}, {"r_max", p.r_max}, {"n", p.n}};
}

void from_json(const json& j, PolarLayout& p) {
  p.cx = field<double>(j, "cx");
  p.cy = field<double>(j, "cy");
  p.r_max = field<double>(j, "r_max");
  p.n = field<std::size_t>(j, "n");
}

void to_json(json& j, const StmlGrid& g) {
  j = json{{"rows", g.rows}, {"cols", g.cols}, {"cell_w", g.cell_w}, {"cell_h", g.cell_h}, {"n", g.n}};
}

void from_json(const json& j, StmlGrid& g) {
  g.rows = field<int>(j, "rows");
  g.cols = field<int>(j, "cols");
  g.cell_w = field<int>(j, "cell_w");
  g.cell_h = field<int>(j, "cell_h");
  g.n = field<std::size_t>(j, "n");
}

void to_json(json& j, const IgtdMapping& m) {
  j = json{{"rows", m.rows},   {"cols", m.cols},   {"assignment", m.assignment},
           {"error_trace", m.error_trace}, {"scans", m.scans}, {"swaps", m.swaps},
           {"truncated", m.truncated}};
}

void from_json(const json& j, IgtdMapping& m) {
  m.rows = field<int>(j, "rows");
  m.cols = field<int>(j, "cols");
  m.assignment = field<std::vector<std::size_t>>(j, "assignment");
  m.error_trace = j.value("error_trace", std::vector<double>{});
  m.scans = j.value("scans", std::size_t{0});
  m.swaps = j.value("swaps", std::size_t{0});
  m.truncated = j.value("truncated", false);
  std::vector<bool> seen(m.assignment.size(), false);
  for (auto cell : m.assignment) {
    if (cell >= seen.size() || seen[cell]) throw ParseError("IGTD assignment is not a permutation", 0);
    seen[cell] = true;
  }
  if (static_cast<std::size_t>(m.rows) * static_cast<std::size_t>(m.cols) < m.assignment.size()) {
    throw ParseError("IGTD grid smaller than the feature count", 0);
  }
}

void to_json(json& j, const EncoderModel& m) {
  if (!m.fitted()) throw StateError("cannot serialize an unfitted encoder model");
  j = json{{"format", kModelFormat},
           {"version", kModelVersion},
           {"kind", std::string(to_string(m.kind))},
           {"canvas", {{"width", m.size.width}, {"height", m.size.height}}},
           {"scaler", *m.scaler}};
  std::visit(
      [&j](const auto& layout) {
        if constexpr (!std::is_same_v<std::decay_t<decltype(layout)>, std::monostate>) j["layout"] = layout;
      },
      m.layout);
}

void from_json(const json& j, EncoderModel& m) {
  if (!j.is_object() || j.value("format", std::string{}) != kModelFormat) {
    throw ParseError("not an encoder model document", 0);
  }
  if (j.value("version", 0) != kModelVersion) throw ParseError("unsupported model version", 0);
  try {
    m.kind = parse_encoder_kind(field<std::string>(j, "kind"));
  } catch (const ParameterError& e) {
    throw ParseError(e.what(), 0);
  }
  const auto canvas = field<json>(j, "canvas");
  m.size = {field<int>(canvas, "width"), field<int>(canvas, "height")};
  if (m.size.width <= 0 || m.size.height <= 0) throw ParseError("canvas size must be positive", 0);
  m.scaler = field<ScalerParams>(j, "scaler");
  const auto layout = field<json>(j, "layout");
  const std::size_t n = m.scaler->n_features();
  switch (m.kind) {
    case EncoderKind::Retire: {
      auto p = layout.get<PolarLayout>();
      if (p.n != n) throw ParseError("layout vertex count differs from scaler feature count", 0);
      m.layout = p;
      break;
    }
    case EncoderKind::Stml: {
      auto g = layout.get<StmlGrid>();
      g.size = m.size;
      if (g.n != n) throw ParseError("grid feature count differs from scaler feature count", 0);
      if (make_stml_grid(g.n, g.size) != g) throw ParseError("STML grid inconsistent with canvas size", 0);
      m.layout = g;
      break;
    }
    case EncoderKind::Igtd: {
      auto mapping = layout.get<IgtdMapping>();
      if (mapping.assignment.size() != n) throw ParseError("assignment size differs from feature count", 0);
      if (m.size != Size{mapping.cols, mapping.rows}) throw ParseError("IGTD canvas must match its grid", 0);
      m.layout = std::move(mapping);
      break;
    }
  }
}

void to_json(json& j, const EvalReport& r) {
  j = json{{"dataset", r.dataset},
           {"encoder", r.encoder},
           {"per_split_bac", r.per_split_bac},
           {"mean_bac", r.mean_bac},
           {"fold_predictions", r.fold_predictions}};
}

void from_json(const json& j, EvalReport& r) {
  r.dataset = field<std::string>(j, "dataset");
  r.encoder = field<std::string>(j, "encoder");
  r.per_split_bac = field<std::vector<double>>(j, "per_split_bac");
  r.mean_bac = field<double>(j, "mean_bac");
  r.fold_predictions = j.value("fold_predictions", std::vector<std::vector<int>>{});
  if (r.per_split_bac.size() != 10) throw ParseError("report needs 10 per-split scores", 0);
}

void to_json(json& j, const TimingRecord& r) {
  j = json{{"encoder", std::string(to_string(r.encoder))},
           {"n_features", r.n_features},
           {"n_samples", r.n_samples},
           {"encode_time", r.encode_time},
           {"fit_time", r.fit_time},
           {"repeats", r.repeats},
           {"truncated", r.truncated}};
}

void to_json(json& j, const FTestResult& r) {
  j = json{{"F", real_or_null(r.f)},
           {"p_value", r.p_value},
           {"significant", r.significant},
           {"degenerate", r.degenerate}};
}

void to_json(json& j, const WilcoxonResult& r) {
  j = json{{"W", r.w},          {"W_plus", r.w_plus}, {"W_minus", r.w_minus}, {"p_value", r.p_value},
           {"significant", r.significant}, {"n", r.n},           {"exact", r.exact}};
}

void to_json(json& j, const LinearFit& f) {
  j = json{{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace mde
