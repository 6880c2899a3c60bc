#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mde/bench.hpp"
#include "mde/encoders.hpp"
#include "mde/probe.hpp"
#include "mde/scaling.hpp"
#include "mde/stats.hpp"

// nlohmann ADL hooks. Reals round-trip bit-exactly; non-finite values are
// written as null.
namespace mde {

using json = nlohmann::json;

void to_json(json& j, const ScalerParams& p);
void from_json(const json& j, ScalerParams& p);

void to_json(json& j, const PolarLayout& p);
void from_json(const json& j, PolarLayout& p);

void to_json(json& j, const StmlGrid& g);
void from_json(const json& j, StmlGrid& g);

void to_json(json& j, const IgtdMapping& m);
void from_json(const json& j, IgtdMapping& m);

/// {"format": "mde-encoder-model", "version": 1, "kind", "canvas", "scaler", "layout"}
void to_json(json& j, const EncoderModel& m);
/// Throws ParseError when the document is not a fitted model.
void from_json(const json& j, EncoderModel& m);

void to_json(json& j, const EvalReport& r);
void from_json(const json& j, EvalReport& r);

void to_json(json& j, const TimingRecord& r);
void to_json(json& j, const FTestResult& r);
void to_json(json& j, const WilcoxonResult& r);
void to_json(json& j, const LinearFit& f);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& doc);

}  // namespace mde
