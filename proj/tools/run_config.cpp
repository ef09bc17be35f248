#include "run_config.hpp"

#include <cmath>
#include <system_error>

namespace quasipd::cli {

const Json& section(const Json& config, const char* key) {
    static const Json empty = Json::object();
    if (!config.contains(key)) return empty;
    const Json& s = config.at(key);
    require(s.is_object(), ErrorKind::Input, std::string("config.") + key + " must be an object");
    return s;
}

std::optional<double> number(const Json& obj, const char* key) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    require(obj.at(key).is_number(), ErrorKind::Input, std::string("config key '") + key + "' must be a number");
    return obj.at(key).get<double>();
}

std::optional<int> integer(const Json& obj, const char* key) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    require(obj.at(key).is_number_integer(), ErrorKind::Input, std::string("config key '") + key + "' must be an integer");
    return obj.at(key).get<int>();
}

std::optional<std::string> text(const Json& obj, const char* key) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    const Json& v = obj.at(key);
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    require(v.is_string(), ErrorKind::Input, std::string("config key '") + key + "' must be a string");
    return v.get<std::string>();
}

double pick(const std::optional<double>& flag, const Json& obj, const char* key, const char* what) {
    if (flag) return *flag;
    const auto v = number(obj, key);
    require(v.has_value(), ErrorKind::Input, std::string(what) + " not given (flag or config)");
    return *v;
}

FilterParams filter_params(const Json& config, std::optional<double> rr, std::optional<double> lambda) {
    const Json& f = section(config, "filter");
    FilterParams p;
    p.rr = pick(rr, f, "rr", "RR (--rr / config.filter.rr)");
    p.lambda = pick(lambda, f, "lambda", "lambda (--lambda / config.filter.lambda)");
    require(p.rr > 0.0 && p.rr < 1.0, ErrorKind::Input, "RR must lie in (0,1)");
    require(p.lambda > 0.0, ErrorKind::Input, "lambda must be positive");
    return p;
}

SolverSettings solver_settings(const Json& config) {
    const Json& s = section(config, "solver");
    SolverSettings out;
    if (auto v = integer(s, "max_iterations")) out.max_iterations = *v;
    if (auto v = number(s, "gradient_tolerance")) out.gradient_tolerance = *v;
    if (s.contains("init")) {
        const Json& init = s.at("init");
        if (init.is_string() && init.get<std::string>() == "from_delta") {
            out.initial = init::FromDelta{};
        } else if (init.is_object() && init.contains("flat")) {
            out.initial = init::Flat{init.at("flat").get<double>()};
        } else {
            fail(ErrorKind::Input, "config.solver.init must be \"from_delta\" or {\"flat\": value}");
        }
    }
    return out;
}

HpParams hp_params(const Json& config) {
    HpParams p;
    if (auto v = number(section(config, "hp"), "lambda_hp")) p.lambda_hp = *v;
    return p;
}

synth::SynthSpec synth_spec(const Json& config) {
    synth::SynthSpec spec = synth::default_spec();
    if (!config.contains("simulate")) return spec;
    const Json& s = section(config, "simulate");
    if (auto v = text(s, "segment_id")) spec.segment_id = *v;
    if (auto v = text(s, "start")) spec.start = MonthIndex::parse(*v);
    if (auto v = integer(s, "months")) spec.months = *v;
    if (auto v = number(s, "npl_first")) spec.npl_first = *v;
    if (s.contains("E")) {
        const Json& e = s.at("E");
        if (auto c = number(e, "constant")) spec.E = synth::ConstantE{*c};
        else if (e.contains("geometric")) {
            const Json& g = e.at("geometric");
            spec.E = synth::GeometricE{pick(std::nullopt, g, "level", "E.geometric.level"), number(g, "growth").value_or(0.0)};
        } else fail(ErrorKind::Input, "config.simulate.E must be {constant} or {geometric}");
    }
    if (s.contains("P")) {
        const Json& p = s.at("P");
        if (auto c = number(p, "constant")) spec.P = synth::ConstantP{*c};
        else if (p.contains("humped")) {
            const Json& h = p.at("humped");
            synth::HumpedP hp;
            hp.base = pick(std::nullopt, h, "base", "P.humped.base");
            hp.slope = number(h, "slope").value_or(0.0);
            if (h.contains("humps")) {
                for (const Json& b : h.at("humps")) {
                    hp.humps.push_back({pick(std::nullopt, b, "center", "hump center"), pick(std::nullopt, b, "height", "hump height"),
                                        pick(std::nullopt, b, "width", "hump width")});
                }
            }
            spec.P = hp;
        } else fail(ErrorKind::Input, "config.simulate.P must be {constant} or {humped}");
    }
    if (s.contains("R")) {
        const Json& r = s.at("R");
        if (auto c = number(r, "constant")) spec.R = synth::ConstantR{*c};
        else if (r.contains("noisy")) {
            const Json& n = r.at("noisy");
            spec.R = synth::NoisyR{pick(std::nullopt, n, "rr", "R.noisy.rr"), pick(std::nullopt, n, "amplitude", "R.noisy.amplitude"),
                                   static_cast<std::uint64_t>(integer(n, "seed").value_or(1))};
        } else fail(ErrorKind::Input, "config.simulate.R must be {constant} or {noisy}");
    }
    return spec;
}

int window_start_n(const std::string& value, MonthIndex segment_start) {
    if (value.find('-') != std::string::npos) {
        const MonthIndex m = MonthIndex::parse(value);
        return static_cast<int>(m.months_since(segment_start)) + 1;
    }
    try {
        std::size_t used = 0;
        const int n = std::stoi(value, &used);
        require(used == value.size(), ErrorKind::Input, "");
        return n;
    } catch (const std::exception&) {
        fail(ErrorKind::Input, "window start must be a month number or YYYY-MM, got '" + value + "'");
    }
}

PreparedSegment prepare_segment(const DatasetManifest& manifest, const std::string& id, const HpParams& hp) {
    const auto path = manifest.segment_path(id);
    if (!path) {
        std::string ids;
        for (const auto& s : manifest.segment_ids()) ids += (ids.empty() ? "" : ", ") + s;
        fail(ErrorKind::Input, "unknown segment '" + id + "'; available: " + (ids.empty() ? "(none)" : ids));
    }
    SegmentSeries raw = load_segment_csv(*path, id);
    PreparedSegment out{raw, 0};
    if (raw.E.gap_free() && raw.NPL.gap_free()) return out;
    for (std::size_t i = 0; i < raw.size(); ++i) out.filled_months += (!raw.E[i] || !raw.NPL[i]) ? 1 : 0;
    out.segment = SegmentSeries::make(id, fill_gaps(raw.E, hp), fill_gaps(raw.NPL, hp));
    return out;
}

Json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::stod(format_number(v));
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) fail(ErrorKind::Io, "cannot create output directory " + dir.string());
}

}  // namespace quasipd::cli
