#include "mde/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string_view>

#include "mde/error.hpp"
#include "mde/rng.hpp"

namespace mde {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw ShapeError("matrix storage holds " + std::to_string(values_.size()) +
                     " values, expected " + std::to_string(rows_ * cols_));
  }
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const auto src = row(indices[k]);
    std::copy(src.begin(), src.end(), out.row(k).begin());
  }
  return out;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.name = name;
  out.X = X.select_rows(indices);
  out.y.reserve(indices.size());
  for (auto i : indices) out.y.push_back(y.at(i));
  out.feature_names = feature_names;
  out.class_names = class_names;
  return out;
}

void Dataset::validate() const {
  if (X.rows() == 0) throw EmptyDatasetError(name + ": no instances");
  if (X.rows() != y.size()) {
    throw ShapeError(name + ": " + std::to_string(X.rows()) + " rows but " +
                     std::to_string(y.size()) + " labels");
  }
  if (feature_names.size() != X.cols()) throw ShapeError(name + ": feature name count mismatch");
  if (class_names.size() < 2) throw ParameterError(name + ": at least 2 classes required");
  std::vector<std::size_t> counts(class_names.size(), 0);
  for (int label : y) {
    if (label < 0 || static_cast<std::size_t>(label) >= counts.size()) {
      throw ShapeError(name + ": class index out of range");
    }
    ++counts[label];
  }
  if (std::find(counts.begin(), counts.end(), 0) != counts.end()) {
    throw ParameterError(name + ": class indices are not contiguous");
  }
  for (double v : X.values()) {
    if (!std::isfinite(v)) throw UnsupportedFeatureError(name + ": non-finite feature value");
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(',', start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<double> parse_real(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end || token.empty() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

bool is_missing(std::string_view token) { return token == "?" || token.empty(); }

std::ifstream open_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

// Maps label text to class indices in order of first appearance.
class LabelIndex {
 public:
  int index_of(std::string_view label) {
    const auto it = lookup_.find(std::string(label));
    if (it != lookup_.end()) return it->second;
    const int idx = static_cast<int>(names_.size());
    names_.emplace_back(label);
    lookup_.emplace(names_.back(), idx);
    return idx;
  }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::map<std::string, int> lookup_;
  std::vector<std::string> names_;
};

// Reorders class indices numerically when every label is a non-negative integer.
void canonicalize_integer_labels(Dataset& ds) {
  std::vector<long long> numeric;
  for (const auto& name : ds.class_names) {
    long long v = 0;
    const auto* end = name.data() + name.size();
    const auto [ptr, ec] = std::from_chars(name.data(), end, v);
    if (ec != std::errc{} || ptr != end || v < 0) return;
    numeric.push_back(v);
  }
  std::vector<int> order(numeric.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return numeric[a] < numeric[b]; });
  std::vector<int> remap(order.size());
  std::vector<std::string> names(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    remap[order[k]] = static_cast<int>(k);
    names[k] = ds.class_names[order[k]];
  }
  for (auto& label : ds.y) label = remap[label];
  ds.class_names = std::move(names);
}

struct KeelAttribute {
  std::string name;
  bool nominal = false;
};

}  // namespace

Dataset load_keel(const std::filesystem::path& path) {
  auto in = open_text(path);
  Dataset ds;
  ds.name = path.stem().string();

  std::vector<KeelAttribute> attributes;
  std::vector<std::string> input_names;
  std::optional<std::string> output_name;
  bool in_data = false;
  std::vector<std::size_t> input_cols;
  std::size_t output_col = 0;
  std::vector<double> values;
  LabelIndex labels;

  auto find_attribute = [&](std::string_view name, std::size_t line_no) {
    for (std::size_t i = 0; i < attributes.size(); ++i) {
      if (attributes[i].name == name) return i;
    }
    throw ParseError("unknown attribute '" + std::string(name) + "'", line_no);
  };

  auto start_data = [&](std::size_t line_no) {
    if (attributes.empty()) throw ParseError("@data before any @attribute", line_no);
    output_col = output_name ? find_attribute(*output_name, line_no) : attributes.size() - 1;
    if (!input_names.empty()) {
      for (const auto& n : input_names) input_cols.push_back(find_attribute(n, line_no));
    } else {
      for (std::size_t i = 0; i < attributes.size(); ++i) {
        if (i != output_col) input_cols.push_back(i);
      }
    }
    for (auto c : input_cols) {
      if (c == output_col) throw ParseError("output attribute listed as input", line_no);
      if (attributes[c].nominal) {
        throw UnsupportedFeatureError(path.filename().string() + ": nominal input attribute '" +
                                      attributes[c].name + "' is not supported");
      }
      ds.feature_names.push_back(attributes[c].name);
    }
    if (input_cols.empty()) throw ParseError("no input attributes", line_no);
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '%') continue;

    if (!in_data) {
      if (line.front() != '@') throw ParseError("expected a header line starting with '@'", line_no);
      const auto space = line.find_first_of(" \t");
      const auto keyword = lower(line.substr(0, space));
      const auto rest = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));
      if (keyword == "@relation") {
        if (!rest.empty()) ds.name = std::string(rest);
      } else if (keyword == "@attribute") {
        const auto name_end = rest.find_first_of(" \t{");
        if (rest.empty() || name_end == std::string_view::npos) {
          throw ParseError("malformed @attribute", line_no);
        }
        KeelAttribute attr{std::string(rest.substr(0, name_end)), false};
        const auto decl = trim(rest.substr(name_end));
        if (!decl.empty() && decl.front() == '{') {
          if (decl.back() != '}') throw ParseError("unterminated nominal value list", line_no);
          attr.nominal = true;
        } else {
          const auto type = lower(decl.substr(0, decl.find_first_of(" \t[")));
          if (type != "real" && type != "integer" && type != "numeric") {
            throw ParseError("unknown attribute type '" + type + "'", line_no);
          }
        }
        attributes.push_back(std::move(attr));
      } else if (keyword == "@inputs" || keyword == "@input") {
        for (auto n : split_commas(rest)) {
          if (n.empty()) throw ParseError("empty name in @inputs", line_no);
          input_names.emplace_back(n);
        }
      } else if (keyword == "@outputs" || keyword == "@output") {
        const auto names = split_commas(rest);
        if (names.size() != 1 || names[0].empty()) {
          throw ParseError("exactly one output attribute is supported", line_no);
        }
        output_name = std::string(names[0]);
      } else if (keyword == "@data") {
        start_data(line_no);
        in_data = true;
      } else {
        throw ParseError("unknown header keyword '" + keyword + "'", line_no);
      }
      continue;
    }

    const auto tokens = split_commas(line);
    if (tokens.size() != attributes.size()) {
      throw ParseError("expected " + std::to_string(attributes.size()) + " values, found " +
                           std::to_string(tokens.size()),
                       line_no);
    }
    if (std::any_of(tokens.begin(), tokens.end(), is_missing)) {
      ++ds.dropped_rows;
      continue;
    }
    for (auto c : input_cols) {
      const auto v = parse_real(tokens[c]);
      if (!v) {
        throw UnsupportedFeatureError(path.filename().string() + " line " +
                                      std::to_string(line_no) + ": non-numeric value '" +
                                      std::string(tokens[c]) + "' for attribute '" +
                                      attributes[c].name + "'");
      }
      values.push_back(*v);
    }
    ds.y.push_back(labels.index_of(tokens[output_col]));
  }

  if (!in_data) throw ParseError("missing @data section", line_no);
  if (ds.y.empty()) throw EmptyDatasetError(ds.name + ": no instances");
  ds.X = Matrix(ds.y.size(), input_cols.size(), std::move(values));
  ds.class_names = labels.names();
  ds.validate();
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, const ColumnRef& label_column) {
  auto in = open_text(path);
  Dataset ds;
  ds.name = path.stem().string();

  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, raw)) {
    ++line_no;
    if (trim(raw).empty()) continue;
    for (auto t : split_commas(trim(raw))) header.emplace_back(t);
  }
  if (header.empty()) throw ParseError("missing header row", line_no);

  std::size_t label_col = 0;
  if (const auto* name = std::get_if<std::string>(&label_column)) {
    const auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end()) throw MissingColumnError("label column '" + *name + "' not in header");
    label_col = static_cast<std::size_t>(it - header.begin());
  } else {
    label_col = std::get<std::size_t>(label_column);
    if (label_col >= header.size()) {
      throw MissingColumnError("label column index " + std::to_string(label_col) +
                               " out of range (" + std::to_string(header.size()) + " columns)");
    }
  }
  if (header.size() < 2) throw ParseError("need at least one feature column", line_no);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != label_col) ds.feature_names.push_back(header[c]);
  }

  std::vector<double> values;
  LabelIndex labels;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    const auto tokens = split_commas(line);
    if (tokens.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " values, found " +
                           std::to_string(tokens.size()),
                       line_no);
    }
    if (std::any_of(tokens.begin(), tokens.end(), is_missing)) {
      ++ds.dropped_rows;
      continue;
    }
    for (std::size_t c = 0; c < tokens.size(); ++c) {
      if (c == label_col) continue;
      const auto v = parse_real(tokens[c]);
      if (!v) {
        throw UnsupportedFeatureError(path.filename().string() + " line " +
                                      std::to_string(line_no) + ": non-numeric value '" +
                                      std::string(tokens[c]) + "' in column '" + header[c] + "'");
      }
      values.push_back(*v);
    }
    ds.y.push_back(labels.index_of(tokens[label_col]));
  }
  if (ds.y.empty()) throw EmptyDatasetError(ds.name + ": no instances");
  ds.X = Matrix(ds.y.size(), header.size() - 1, std::move(values));
  ds.class_names = labels.names();
  canonicalize_integer_labels(ds);
  ds.validate();
  return ds;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& name : ds.feature_names) out << name << ',';
  out << "class\n";
  char buf[64];
  for (std::size_t r = 0; r < ds.n_instances(); ++r) {
    for (double v : ds.X.row(r)) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      out.write(buf, res.ptr - buf);
      out << ',';
    }
    out << ds.class_names.at(ds.y[r]) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  if (lower(path.extension().string()) == ".dat") return load_keel(path);
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  const auto n_cols = split_commas(trim(header)).size();
  return load_csv(path, n_cols == 0 ? 0 : n_cols - 1);
}

std::vector<std::size_t> CVPlan::test_indices(std::size_t split) const {
  if (split >= kSplits) throw ParameterError("split index out of range");
  const auto& fold = assignments[split / kFolds];
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] == split % kFolds) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> CVPlan::train_indices(std::size_t split) const {
  if (split >= kSplits) throw ParameterError("split index out of range");
  const auto& fold = assignments[split / kFolds];
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] != split % kFolds) out.push_back(i);
  }
  return out;
}

CVPlan make_cv_plan(const Dataset& ds, std::uint64_t seed) {
  if (ds.y.empty()) throw EmptyDatasetError(ds.name + ": no instances");
  std::size_t n_classes = 0;
  for (int label : ds.y) {
    if (label < 0) throw ShapeError("negative class index");
    n_classes = std::max(n_classes, static_cast<std::size_t>(label) + 1);
  }
  std::vector<std::vector<std::size_t>> members(n_classes);
  for (std::size_t i = 0; i < ds.y.size(); ++i) members[ds.y[i]].push_back(i);
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (members[c].size() < CVPlan::kFolds) {
      throw StratificationError("class " + std::to_string(c) + " has " +
                                std::to_string(members[c].size()) +
                                " instance(s); stratified 2-fold needs at least 2");
    }
  }

  CVPlan plan;
  plan.seed = seed;
  for (std::size_t r = 0; r < CVPlan::kRepeats; ++r) {
    Rng rng(derive_seed(seed, r));
    auto& fold = plan.assignments[r];
    fold.assign(ds.y.size(), 0);
    // The odd member of each class alternates between folds so overall fold
    // sizes stay within one of each other too.
    std::size_t offset = 0;
    for (auto idx : members) {
      rng.shuffle(std::span(idx));
      for (std::size_t k = 0; k < idx.size(); ++k) {
        fold[idx[k]] = static_cast<std::uint8_t>((k + offset) % CVPlan::kFolds);
      }
      offset = (offset + idx.size()) % CVPlan::kFolds;
    }
  }
  return plan;
}

Dataset generate_synthetic(std::size_t n_samples, std::size_t n_features, std::uint64_t seed) {
  if (n_samples < 4) throw ParameterError("synthetic generator needs n_samples >= 4");
  if (n_features < 1) throw ParameterError("synthetic generator needs n_features >= 1");

  Rng rng(seed);
  std::array<std::vector<double>, 2> centroid;
  for (auto& c : centroid) {
    c.resize(n_features);
    for (auto& v : c) v = (rng.next() >> 63) ? 1.0 : -1.0;
  }
  if (centroid[0] == centroid[1]) {
    const auto k = rng.below(n_features);
    centroid[1][k] = -centroid[1][k];
  }

  const std::size_t n_class1 = n_samples / 2;
  std::vector<std::size_t> order(n_samples);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span(order));

  Dataset ds;
  ds.name = "synthetic_n" + std::to_string(n_samples) + "_d" + std::to_string(n_features) + "_s" +
            std::to_string(seed);
  ds.X = Matrix(n_samples, n_features);
  ds.y.assign(n_samples, 0);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const int label = k < n_samples - n_class1 ? 0 : 1;
    const std::size_t r = order[k];
    ds.y[r] = label;
    auto row = ds.X.row(r);
    for (std::size_t f = 0; f < n_features; ++f) row[f] = centroid[label][f] + rng.normal();
  }
  for (std::size_t f = 0; f < n_features; ++f) ds.feature_names.push_back("f" + std::to_string(f));
  ds.class_names = {"0", "1"};
  return ds;
}

}  // namespace mde
