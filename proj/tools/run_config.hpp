#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "quasipd/calibration.hpp"
#include "quasipd/hp_filter.hpp"
#include "quasipd/ingest.hpp"
#include "quasipd/synth.hpp"

namespace quasipd::cli {

using Json = nlohmann::ordered_json;

/// Section of the manifest config, or an empty object.
const Json& section(const Json& config, const char* key);

std::optional<double> number(const Json& obj, const char* key);
std::optional<int> integer(const Json& obj, const char* key);
std::optional<std::string> text(const Json& obj, const char* key);

/// Flag value wins over config; both absent is an input error naming the key.
double pick(const std::optional<double>& flag, const Json& obj, const char* key, const char* what);

FilterParams filter_params(const Json& config, std::optional<double> rr, std::optional<double> lambda);
SolverSettings solver_settings(const Json& config);
HpParams hp_params(const Json& config);
synth::SynthSpec synth_spec(const Json& config);

/// Resolves a window start given as 1-based month number or "YYYY-MM".
int window_start_n(const std::string& value, MonthIndex segment_start);

struct PreparedSegment {
    SegmentSeries segment;
    int filled_months = 0;
};

/// Loads a segment and imputes gaps in E and NPL independently with the HP filter.
PreparedSegment prepare_segment(const DatasetManifest& manifest, const std::string& id, const HpParams& hp);

/// Rounds to the 10 significant digits used for every numeric output; NaN/inf become null.
Json num(double v);

void ensure_directory(const std::filesystem::path& dir);

}  // namespace quasipd::cli
