#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "quasipd/series.hpp"
#include "quasipd/validation.hpp"

namespace quasipd {

/// CSV keyed by an ISO month column. Every other column becomes a series over
/// the span from the earliest to the latest month; empty cells and months
/// without a row are missing.
struct MonthlyTable {
    std::vector<std::string> columns;  // excluding "month"
    std::vector<MonthlySeries> series;

    [[nodiscard]] const MonthlySeries& get(std::string_view column) const;
};

MonthlyTable load_monthly_table(const std::filesystem::path& path);

/// Header `month,E,NPL`.
SegmentSeries load_segment_csv(const std::filesystem::path& path, std::string segment_id);
/// Header `month,DF`; values in [0,1].
ReferenceDfSeries load_reference_df_csv(const std::filesystem::path& path, std::string segment_id);

struct WeightEntry {
    std::string segment_id;
    double weight;
};

/// Header `segment_id,weight`; weights >= 0 with at least one positive.
std::vector<WeightEntry> load_weights_csv(const std::filesystem::path& path);

/// Number formatting shared by every writer: 10 significant digits.
std::string format_number(double v);

/// Writes `month,<names...>`; all series must share one span.
void write_monthly_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
                       const std::vector<MonthlySeries>& series);
void write_segment_csv(const std::filesystem::path& path, const SegmentSeries& segment);
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// JSON manifest: {"segments": {id: path}, "reference_df": path, "weights": path,
/// "factors": path, "config": {...}}. Relative paths resolve against the manifest's directory.
struct DatasetManifest {
    std::filesystem::path base_dir;
    std::vector<std::pair<std::string, std::filesystem::path>> segments;  // file order
    std::optional<std::filesystem::path> reference_df;
    std::optional<std::filesystem::path> weights;
    std::optional<std::filesystem::path> factors;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();

    [[nodiscard]] std::optional<std::filesystem::path> segment_path(std::string_view id) const;
    [[nodiscard]] std::vector<std::string> segment_ids() const;
};

DatasetManifest load_manifest(const std::filesystem::path& path);

}  // namespace quasipd
