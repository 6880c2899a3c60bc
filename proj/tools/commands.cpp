#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "mde/data.hpp"
#include "mde/error.hpp"
#include "mde/json_io.hpp"
#include "mde/stats.hpp"

namespace mde::cli {

namespace fs = std::filesystem;

namespace {

std::string size_text(Size s) { return std::to_string(s.width) + "x" + std::to_string(s.height); }

std::size_t parse_index(std::string_view text) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParameterError("not a row index: '" + std::string(text) + "'");
  }
  return value;
}

const std::string& single_dataset(const RunConfig& cfg) {
  if (cfg.datasets.size() != 1) throw ParameterError(cfg.subcommand + " needs exactly one --dataset");
  return cfg.datasets.front();
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

fs::path prepare_out(const RunConfig& cfg) {
  fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

EncoderKind image_encoder(const RunConfig& cfg) {
  if (cfg.encoder == "tabular") throw ParameterError("'tabular' is only valid for eval");
  return parse_encoder_kind(cfg.encoder);
}

std::string join_indices(const json& list) {
  if (list.empty()) return "---";
  std::string s;
  for (const auto& v : list) {
    if (!s.empty()) s += ", ";
    s += std::to_string(v.get<int>());
  }
  return s;
}

}  // namespace

EncoderParams RunConfig::encoder_params() const {
  EncoderParams p;
  p.l = l;
  p.u = u;
  p.size = size;
  p.igtd.max_iters = igtd_iters;
  p.igtd.patience = igtd_patience;
  p.igtd.seed = seed;
  p.igtd.budget_secs = budget_secs;
  return p;
}

json config_json(const RunConfig& cfg) {
  return json{{"subcommand", cfg.subcommand},
              {"datasets", cfg.datasets},
              {"label", cfg.label},
              {"encoder", cfg.encoder},
              {"l", cfg.l},
              {"u", cfg.u},
              {"size", size_text(cfg.size)},
              {"seed", cfg.seed},
              {"out", cfg.out},
              {"jobs", cfg.jobs},
              {"igtd_iters", cfg.igtd_iters},
              {"igtd_patience", cfg.igtd_patience},
              {"grid", cfg.grid},
              {"samples", cfg.samples},
              {"repeats", cfg.repeats},
              {"budget_secs", cfg.budget_secs},
              {"channels", cfg.channels},
              {"model", cfg.model},
              {"rows", cfg.rows},
              {"reports", cfg.reports},
              {"alpha", cfg.alpha}};
}

Size parse_size(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw ParameterError("size must look like WxH, got '" + text + "'");
  int w = 0, h = 0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  const auto rw = std::from_chars(begin, begin + x, w);
  const auto rh = std::from_chars(begin + x + 1, end, h);
  if (rw.ec != std::errc{} || rw.ptr != begin + x || rh.ec != std::errc{} || rh.ptr != end || w <= 0 || h <= 0) {
    throw ParameterError("size must look like WxH with positive integers, got '" + text + "'");
  }
  return {w, h};
}

std::vector<std::size_t> parse_rows(const std::string& text, std::size_t n_rows) {
  std::vector<std::size_t> rows;
  if (text.empty()) {
    rows.resize(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) rows[i] = i;
    return rows;
  }
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto dash = part.find('-');
    std::size_t lo = 0, hi = 0;
    if (dash == std::string::npos) {
      lo = hi = parse_index(part);
    } else {
      lo = parse_index(std::string_view(part).substr(0, dash));
      hi = parse_index(std::string_view(part).substr(dash + 1));
      if (hi < lo) throw ParameterError("descending row range '" + part + "'");
    }
    if (hi >= n_rows) {
      throw ParameterError("row " + std::to_string(hi) + " out of range for " + std::to_string(n_rows) + " rows");
    }
    for (std::size_t r = lo; r <= hi; ++r) rows.push_back(r);
  }
  if (rows.empty()) throw ParameterError("empty row selection");
  return rows;
}

Dataset load_input(const RunConfig& cfg, const std::string& path) {
  const fs::path p(path);
  if (cfg.label.empty() || p.extension() == ".dat") return load_dataset(p);
  const bool numeric = std::all_of(cfg.label.begin(), cfg.label.end(), [](char c) { return c >= '0' && c <= '9'; });
  if (numeric) return load_csv(p, ColumnRef{parse_index(cfg.label)});
  return load_csv(p, ColumnRef{cfg.label});
}

fs::path cmd_fit(const RunConfig& cfg) {
  const auto& path = single_dataset(cfg);
  const EncoderKind kind = image_encoder(cfg);
  const Dataset ds = load_input(cfg, path);
  const EncoderModel model = fit_encoder(kind, ds, cfg.encoder_params());
  json doc = model;
  doc["dataset"] = stem_of(path);
  doc["config"] = config_json(cfg);
  const fs::path target = prepare_out(cfg) / (stem_of(path) + "_" + std::string(to_string(kind)) + ".model.json");
  write_json_file(target, doc);
  return target;
}

std::vector<fs::path> cmd_encode(const RunConfig& cfg) {
  if (cfg.model.empty()) throw ParameterError("encode needs --model");
  if (cfg.channels != 1 && cfg.channels != 3) throw ParameterError("--channels must be 1 or 3");
  const auto& path = single_dataset(cfg);
  const EncoderModel model = read_json_file(cfg.model).get<EncoderModel>();
  const Dataset ds = load_input(cfg, path);
  if (ds.n_features() != model.n_features()) {
    throw ShapeError("dataset has " + std::to_string(ds.n_features()) + " features, model expects " +
                     std::to_string(model.n_features()));
  }
  const auto& names = model.scaler->feature_names;
  if (!names.empty() && !ds.feature_names.empty() && names != ds.feature_names) {
    throw ShapeError("dataset feature names differ from the fitted model's");
  }
  const auto rows = parse_rows(cfg.rows, ds.n_instances());
  const auto images = encode_rows(model, ds.X.select_rows(rows), std::max(1u, cfg.jobs));
  const fs::path dir = prepare_out(cfg);
  const std::string ext = cfg.channels == 3 ? ".ppm" : ".pgm";
  std::vector<fs::path> written;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const fs::path target = dir / (stem_of(path) + "_" + std::to_string(rows[i]) + ext);
    write_image(images[i], target, cfg.channels);
    written.push_back(target);
  }
  return written;
}

fs::path cmd_eval(const RunConfig& cfg) {
  const auto& path = single_dataset(cfg);
  const ProbeTarget target = ProbeTarget::parse(cfg.encoder);
  Dataset ds = load_input(cfg, path);
  ds.name = stem_of(path);
  const CVPlan plan = make_cv_plan(ds, cfg.seed);
  EvalOptions options;
  options.params = cfg.encoder_params();
  options.jobs = std::max(1u, cfg.jobs);
  const EvalReport report = run_cv_eval(ds, target, plan, options);
  json doc = report;
  doc["dropped_rows"] = ds.dropped_rows;
  doc["config"] = config_json(cfg);
  const fs::path out = prepare_out(cfg) / (ds.name + "_" + target.name() + ".eval.json");
  write_json_file(out, doc);
  return out;
}

json build_stats_report(const std::vector<EvalReport>& reports, double alpha) {
  std::vector<std::string> methods, datasets;
  std::map<std::pair<std::string, std::string>, const EvalReport*> cell;
  for (const auto& r : reports) {
    if (std::find(methods.begin(), methods.end(), r.encoder) == methods.end()) methods.push_back(r.encoder);
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);
    if (!cell.emplace(std::pair{r.dataset, r.encoder}, &r).second) {
      throw ParameterError("duplicate report for " + r.dataset + " / " + r.encoder);
    }
  }
  if (methods.empty()) throw ParameterError("stats needs at least one report");
  const std::size_t m = methods.size();

  std::vector<std::vector<double>> bac(datasets.size(), std::vector<double>(m));
  json rows = json::array();
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    std::vector<const EvalReport*> col(m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto it = cell.find({datasets[d], methods[i]});
      if (it == cell.end()) throw ShapeError("no " + methods[i] + " report for dataset " + datasets[d]);
      col[i] = it->second;
      bac[d][i] = col[i]->mean_bac;
    }
    json better = json::array();
    for (std::size_t i = 0; i < m; ++i) better.push_back(json::array());
    json tests = json::array();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const auto f = combined_5x2cv_f_test(PairedCVScores::from(col[i]->per_split_bac, col[j]->per_split_bac), alpha);
        if (f.significant && bac[d][i] != bac[d][j]) {
          if (bac[d][i] > bac[d][j]) {
            better[i].push_back(j + 1);
          } else {
            better[j].push_back(i + 1);
          }
        }
        json t = f;
        t["a"] = methods[i];
        t["b"] = methods[j];
        tests.push_back(t);
      }
    }
    for (auto& b : better) std::sort(b.begin(), b.end());
    rows.push_back(json{{"dataset", datasets[d]}, {"mean_bac", bac[d]}, {"better_than", better}, {"f_tests", tests}});
  }

  const auto ranks = mean_ranks(bac);
  json wilcoxon = json::array();
  json rank_better = json::array();
  for (std::size_t i = 0; i < m; ++i) rank_better.push_back(json::array());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      std::vector<double> a(datasets.size()), b(datasets.size());
      for (std::size_t d = 0; d < datasets.size(); ++d) {
        a[d] = bac[d][i];
        b[d] = bac[d][j];
      }
      json entry{{"a", methods[i]}, {"b", methods[j]}};
      try {
        const auto w = wilcoxon_signed_rank(a, b, alpha);
        entry.update(json(w));
        if (w.significant) {
          if (w.w_plus > w.w_minus) {
            rank_better[i].push_back(j + 1);
          } else if (w.w_minus > w.w_plus) {
            rank_better[j].push_back(i + 1);
          }
        }
      } catch (const InsufficientDataError& e) {
        entry["error"] = e.what();
        entry["significant"] = false;
      }
      wilcoxon.push_back(entry);
    }
  }
  for (auto& b : rank_better) std::sort(b.begin(), b.end());

  return json{{"methods", methods},
              {"alpha", alpha},
              {"datasets", rows},
              {"mean_rank", ranks},
              {"wilcoxon_better_than", rank_better},
              {"wilcoxon", wilcoxon}};
}

void print_stats_table(const json& report, std::ostream& os) {
  const auto methods = report.at("methods").get<std::vector<std::string>>();
  std::size_t name_w = 9;
  for (const auto& row : report.at("datasets")) name_w = std::max(name_w, row.at("dataset").get<std::string>().size());
  constexpr int kCol = 12;
  char buf[64];
  auto line = [&](const std::string& first, const std::vector<std::string>& cells) {
    os << first << std::string(name_w - std::min(name_w, first.size()) + 2, ' ');
    for (const auto& c : cells) {
      std::snprintf(buf, sizeof buf, "%-*s", kCol, c.c_str());
      os << buf;
    }
    os << '\n';
  };
  std::vector<std::string> header;
  for (std::size_t i = 0; i < methods.size(); ++i) header.push_back(methods[i] + "^" + std::to_string(i + 1));
  line("", header);
  for (const auto& row : report.at("datasets")) {
    std::vector<std::string> values, sig;
    for (std::size_t i = 0; i < methods.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.3f", row.at("mean_bac")[i].get<double>());
      values.emplace_back(buf);
      sig.push_back(join_indices(row.at("better_than")[i]));
    }
    line(row.at("dataset").get<std::string>(), values);
    line("", sig);
  }
  std::vector<std::string> ranks, sig;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.3f", report.at("mean_rank")[i].get<double>());
    ranks.emplace_back(buf);
    sig.push_back(join_indices(report.at("wilcoxon_better_than")[i]));
  }
  line("Mean rank", ranks);
  line("", sig);
}

fs::path cmd_stats(const RunConfig& cfg, std::ostream& table) {
  if (cfg.reports.empty()) throw ParameterError("stats needs at least one report file");
  std::vector<EvalReport> reports;
  for (const auto& file : cfg.reports) {
    const json doc = read_json_file(file);
    try {
      if (doc.is_array()) {
        for (const auto& item : doc) reports.push_back(item.get<EvalReport>());
      } else {
        reports.push_back(doc.get<EvalReport>());
      }
    } catch (const json::exception& e) {
      throw ParseError(file + ": " + e.what(), 0);
    }
  }
  json report = build_stats_report(reports, cfg.alpha);
  report["config"] = config_json(cfg);
  print_stats_table(report, table);
  const fs::path out = prepare_out(cfg) / "stats.json";
  write_json_file(out, report);
  return out;
}

fs::path cmd_bench(const RunConfig& cfg, std::ostream& summary) {
  SweepConfig sweep;
  sweep.encoder = image_encoder(cfg);
  sweep.feature_counts = cfg.grid;
  sweep.n_samples = cfg.samples;
  sweep.repeats = cfg.repeats;
  sweep.seed = cfg.seed;
  sweep.budget_secs = cfg.budget_secs;
  sweep.params = cfg.encoder_params();
  const auto records = run_timing_sweep(sweep);
  const fs::path out = prepare_out(cfg) / ("bench_" + std::string(to_string(sweep.encoder)) + ".jsonl");
  std::ofstream os(out);
  if (!os) throw IoError("cannot write " + out.string());
  const json config = config_json(cfg);
  for (const auto& r : records) {
    json line = r;
    line["config"] = config;
    os << line.dump() << '\n';
  }
  if (!os) throw IoError("write failed for " + out.string());
  char buf[128];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "N=%-5zu encode %.6f s  fit %.6f s  repeats %zu%s", r.n_features, r.encode_time,
                  r.fit_time, r.repeats, r.truncated ? "  (truncated)" : "");
    summary << buf << '\n';
  }
  if (records.size() >= 3) {
    const auto fit = linearity_fit(records);
    std::snprintf(buf, sizeof buf, "slope %.3e s/feature, r^2 %.4f", fit.slope, fit.r_squared);
    summary << buf << '\n';
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string size = size_text(cfg.size);

  CLI::App app{"Tabular-to-image encoders with a 1-NN probe, 5x2 CV statistics and timing sweeps", "mde"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  app.add_option("--dataset", cfg.datasets, "KEEL .dat or CSV file");
  app.add_option("--label", cfg.label, "CSV label column (name or index, default: last)");
  app.add_option("--encoder", cfg.encoder, "retire | stml | igtd | tabular")->capture_default_str();
  app.add_option("--l", cfg.l, "lower guard bound")->capture_default_str();
  app.add_option("--u", cfg.u, "upper guard bound")->capture_default_str();
  app.add_option("--size", size, "canvas size WxH")->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for folds, IGTD and synthetic data")->capture_default_str();
  app.add_option("--out", cfg.out, "output directory")->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "worker threads for encoding and 1-NN")->capture_default_str();
  app.add_option("--igtd-iters", cfg.igtd_iters, "IGTD scan limit")->capture_default_str();
  app.add_option("--igtd-patience", cfg.igtd_patience, "IGTD scans without improvement before stopping")
      ->capture_default_str();
  app.add_option("--grid", cfg.grid, "bench feature counts")->delimiter(',')->capture_default_str();
  app.add_option("--samples", cfg.samples, "bench samples per synthetic dataset")->capture_default_str();
  app.add_option("--repeats", cfg.repeats, "bench timed repeats per point")->capture_default_str();
  app.add_option("--budget-secs", cfg.budget_secs, "time budget per IGTD fit and per bench point, 0 = none")
      ->capture_default_str();
  app.add_option("--channels", cfg.channels, "1 writes PGM, 3 writes PPM")->capture_default_str();
  app.add_option("--model", cfg.model, "model JSON written by fit");
  app.add_option("--rows", cfg.rows, "rows to encode, e.g. 0-4,9 (default: all)");
  app.add_option("--alpha", cfg.alpha, "significance level")->capture_default_str();

  auto* fit = app.add_subcommand("fit", "fit an encoder and write its model JSON");
  auto* enc = app.add_subcommand("encode", "encode dataset rows into PGM/PPM files");
  auto* eval = app.add_subcommand("eval", "5x2 CV evaluation with the 1-NN probe");
  auto* stats = app.add_subcommand("stats", "compare eval reports");
  stats->add_option("reports", cfg.reports, "eval report JSON files");
  auto* bench = app.add_subcommand("bench", "encoding-time sweep over feature counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.size = parse_size(size);
    if (fit->parsed()) {
      cfg.subcommand = "fit";
      out << cmd_fit(cfg).string() << '\n';
    } else if (enc->parsed()) {
      cfg.subcommand = "encode";
      const auto files = cmd_encode(cfg);
      out << "wrote " << files.size() << " images to " << cfg.out << '\n';
    } else if (eval->parsed()) {
      cfg.subcommand = "eval";
      const auto path = cmd_eval(cfg);
      const auto doc = read_json_file(path);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", doc.at("mean_bac").get<double>());
      out << doc.at("dataset").get<std::string>() << " " << doc.at("encoder").get<std::string>()
          << " mean BAC " << buf << " -> " << path.string() << '\n';
    } else if (stats->parsed()) {
      cfg.subcommand = "stats";
      const auto path = cmd_stats(cfg, out);
      out << path.string() << '\n';
    } else if (bench->parsed()) {
      cfg.subcommand = "bench";
      const auto path = cmd_bench(cfg, out);
      out << path.string() << '\n';
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace mde::cli
