#include "quasipd/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "quasipd/error.hpp"

namespace quasipd {
namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string location(const fs::path& path, std::size_t line) { return path.string() + ":" + std::to_string(line); }

std::optional<double> parse_number(std::string_view text, const fs::path& path, std::size_t line) {
    if (text.empty()) return std::nullopt;
    double v = 0.0;
    const char* b = text.data();
    const char* e = b + text.size();
    if (*b == '+') ++b;
    const auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc{} || r.ptr != e || !std::isfinite(v)) {
        fail(ErrorKind::Input, location(path, line) + ": malformed number '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

void expect_header(const MonthlyTable& t, const std::vector<std::string>& want, const fs::path& path) {
    if (t.columns != want) {
        std::string w = "month";
        for (const auto& c : want) w += "," + c;
        fail(ErrorKind::Input, location(path, 1) + ": expected header '" + w + "'");
    }
}

}  // namespace

const MonthlySeries& MonthlyTable::get(std::string_view column) const {
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j] == column) return series[j];
    }
    fail(ErrorKind::Input, "no column '" + std::string(column) + "'");
}

MonthlyTable load_monthly_table(const fs::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    require(!lines.empty(), ErrorKind::Input, path.string() + ": empty file");
    const auto header = split(lines[0]);
    require(header.size() >= 2 && header[0] == "month", ErrorKind::Input, location(path, 1) + ": header must start with 'month' and name at least one column");

    MonthlyTable table;
    std::set<std::string> seen;
    for (std::size_t j = 1; j < header.size(); ++j) {
        require(!header[j].empty() && seen.insert(std::string(header[j])).second, ErrorKind::Input,
                location(path, 1) + ": empty or duplicate column name");
        table.columns.emplace_back(header[j]);
    }

    std::map<MonthIndex, std::vector<Observation>> rows;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (trim(lines[ln]).empty()) continue;
        const auto cells = split(lines[ln]);
        require(cells.size() == header.size(), ErrorKind::Input,
                location(path, ln + 1) + ": expected " + std::to_string(header.size()) + " fields, found " + std::to_string(cells.size()));
        MonthIndex m;
        try {
            m = MonthIndex::parse(cells[0]);
        } catch (const Error& e) {
            fail(ErrorKind::Input, location(path, ln + 1) + ": " + e.what());
        }
        std::vector<Observation> values;
        for (std::size_t j = 1; j < cells.size(); ++j) values.push_back(parse_number(cells[j], path, ln + 1));
        require(rows.emplace(m, std::move(values)).second, ErrorKind::Input, location(path, ln + 1) + ": duplicate month " + m.to_string());
    }
    require(!rows.empty(), ErrorKind::Input, path.string() + ": no data rows");

    const MonthIndex first = rows.begin()->first;
    const MonthIndex last = rows.rbegin()->first;
    const auto length = static_cast<std::size_t>(last.months_since(first)) + 1;
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
        std::vector<Observation> col(length);
        for (const auto& [m, values] : rows) col[static_cast<std::size_t>(m.months_since(first))] = values[j];
        table.series.emplace_back(first, std::move(col));
    }
    return table;
}

SegmentSeries load_segment_csv(const fs::path& path, std::string segment_id) {
    const MonthlyTable t = load_monthly_table(path);
    expect_header(t, {"E", "NPL"}, path);
    try {
        return SegmentSeries::make(std::move(segment_id), t.series[0], t.series[1]);
    } catch (const Error& e) {
        fail(e.kind(), path.string() + ": " + e.what());
    }
}

ReferenceDfSeries load_reference_df_csv(const fs::path& path, std::string segment_id) {
    const MonthlyTable t = load_monthly_table(path);
    expect_header(t, {"DF"}, path);
    const MonthlySeries& df = t.series[0];
    for (std::size_t i = 0; i < df.size(); ++i) {
        if (df[i] && (*df[i] < 0.0 || *df[i] > 1.0)) {
            fail(ErrorKind::Input, path.string() + ": default frequency " + format_number(*df[i]) + " outside [0,1] at " +
                                       df.start().plus(static_cast<long>(i)).to_string());
        }
    }
    return ReferenceDfSeries{std::move(segment_id), df};
}

std::vector<WeightEntry> load_weights_csv(const fs::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    require(!lines.empty(), ErrorKind::Input, path.string() + ": empty file");
    const auto header = split(lines[0]);
    require(header.size() == 2 && header[0] == "segment_id" && header[1] == "weight", ErrorKind::Input,
            location(path, 1) + ": expected header 'segment_id,weight'");
    std::vector<WeightEntry> out;
    std::set<std::string> seen;
    bool any_positive = false;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (trim(lines[ln]).empty()) continue;
        const auto cells = split(lines[ln]);
        require(cells.size() == 2 && !cells[0].empty(), ErrorKind::Input, location(path, ln + 1) + ": expected 'segment_id,weight'");
        const auto w = parse_number(cells[1], path, ln + 1);
        require(w.has_value(), ErrorKind::Input, location(path, ln + 1) + ": missing weight");
        require(*w >= 0.0, ErrorKind::Input, location(path, ln + 1) + ": negative weight for '" + std::string(cells[0]) + "'");
        require(seen.insert(std::string(cells[0])).second, ErrorKind::Input, location(path, ln + 1) + ": duplicate segment '" + std::string(cells[0]) + "'");
        any_positive = any_positive || *w > 0.0;
        out.push_back({std::string(cells[0]), *w});
    }
    require(any_positive, ErrorKind::Input, path.string() + ": at least one weight must be positive");
    return out;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

void write_monthly_csv(const fs::path& path, const std::vector<std::string>& names, const std::vector<MonthlySeries>& series) {
    require(!series.empty() && names.size() == series.size(), ErrorKind::Input, "write_monthly_csv: names and series differ");
    for (const auto& s : series) {
        require(s.start() == series[0].start() && s.size() == series[0].size(), ErrorKind::Input, "write_monthly_csv: series are not aligned");
    }
    std::ostringstream os;
    os << "month";
    for (const auto& n : names) os << ',' << n;
    os << '\n';
    for (std::size_t i = 0; i < series[0].size(); ++i) {
        os << series[0].start().plus(static_cast<long>(i)).to_string();
        for (const auto& s : series) {
            os << ',';
            if (s[i]) os << format_number(*s[i]);
        }
        os << '\n';
    }
    write_text_file(path, os.str());
}

void write_segment_csv(const fs::path& path, const SegmentSeries& segment) {
    write_monthly_csv(path, {"E", "NPL"}, {segment.E, segment.NPL});
}

std::optional<fs::path> DatasetManifest::segment_path(std::string_view id) const {
    for (const auto& [sid, p] : segments) {
        if (sid == id) return p;
    }
    return std::nullopt;
}

std::vector<std::string> DatasetManifest::segment_ids() const {
    std::vector<std::string> ids;
    for (const auto& s : segments) ids.push_back(s.first);
    return ids;
}

DatasetManifest load_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open manifest " + path.string());
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Input, path.string() + ": invalid JSON: " + e.what());
    }
    require(j.is_object(), ErrorKind::Input, path.string() + ": manifest must be a JSON object");

    DatasetManifest m;
    m.base_dir = path.parent_path();
    auto resolve = [&](const nlohmann::ordered_json& v, const std::string& key) {
        require(v.is_string(), ErrorKind::Input, path.string() + ": '" + key + "' must be a path string");
        fs::path p = v.get<std::string>();
        return p.is_absolute() ? p : m.base_dir / p;
    };
    if (j.contains("segments")) {
        const auto& segs = j["segments"];
        require(segs.is_object(), ErrorKind::Input, path.string() + ": 'segments' must map ids to paths");
        for (const auto& [id, p] : segs.items()) m.segments.emplace_back(id, resolve(p, "segments." + id));
    }
    for (const char* key : {"reference_df", "weights", "factors"}) {
        if (!j.contains(key) || j[key].is_null()) continue;
        const fs::path p = resolve(j[key], key);
        if (std::string_view(key) == "reference_df") m.reference_df = p;
        else if (std::string_view(key) == "weights") m.weights = p;
        else m.factors = p;
    }
    if (j.contains("config")) {
        require(j["config"].is_object(), ErrorKind::Input, path.string() + ": 'config' must be an object");
        m.config = j["config"];
    }
    return m;
}

}  // namespace quasipd
