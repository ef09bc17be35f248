// quasipd: command-line front end for the PD filtering toolkit.
//
// Exit codes: 0 success, 2 input, 3 IO, 4 infeasible, 5 numerical failure.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "quasipd/calibration.hpp"
#include "quasipd/hp_filter.hpp"
#include "quasipd/ingest.hpp"
#include "quasipd/macromodel.hpp"
#include "quasipd/pd_filter.hpp"
#include "quasipd/plot.hpp"
#include "quasipd/synth.hpp"
#include "quasipd/validation.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace quasipd;
using quasipd::cli::Json;
using quasipd::cli::num;

namespace {

struct Globals {
    std::string manifest;
    std::string out = ".";
    std::string log_level = "info";
};

void write_json(const fs::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

DatasetManifest require_manifest(const Globals& g) {
    require(!g.manifest.empty(), ErrorKind::Input, "--manifest is required for this command");
    return load_manifest(g.manifest);
}

std::string pick_segment(const DatasetManifest& m, const std::string& flag) {
    if (!flag.empty()) return flag;
    require(m.segments.size() == 1, ErrorKind::Input,
            m.segments.empty() ? "manifest lists no segments" : "several segments in manifest; choose one with --segment");
    return m.segments.front().first;
}

fs::path out_dir(const Globals& g) {
    const fs::path dir = g.out;
    cli::ensure_directory(dir);
    return dir;
}

AnnualPdSeries read_pd_csv(const fs::path& path, const std::string& column) {
    const MonthlyTable t = load_monthly_table(path);
    const MonthlySeries& s = t.get(column);
    return AnnualPdSeries{s.start(), s.require_dense(path.string())};
}

Json trace_json(const std::vector<TraceRow>& trace) {
    Json rows = Json::array();
    for (const auto& r : trace) {
        Json row;
        row["lambda"] = num(r.lambda);
        row["rr"] = r.rr ? num(*r.rr) : Json(nullptr);
        row["mean_pd"] = r.mean_pd ? num(*r.mean_pd) : Json(nullptr);
        row["extrema"] = r.extrema ? Json(*r.extrema) : Json(nullptr);
        row["error"] = r.error.empty() ? Json(nullptr) : Json(r.error);
        rows.push_back(row);
    }
    return rows;
}

// ---- fit -------------------------------------------------------------------

struct FitOptions {
    std::string segment;
    std::optional<double> rr;
    std::optional<double> lambda;
};

int cmd_fit(const Globals& g, const FitOptions& o) {
    const DatasetManifest m = require_manifest(g);
    const std::string id = pick_segment(m, o.segment);
    const FilterParams params = cli::filter_params(m.config, o.rr, o.lambda);
    const SolverSettings settings = cli::solver_settings(m.config);
    const fs::path dir = out_dir(g);
    const auto prepared = cli::prepare_segment(m, id, cli::hp_params(m.config));
    if (prepared.filled_months > 0) spdlog::info("{}: imputed {} missing months with the HP filter", id, prepared.filled_months);

    const FilterResult r = solve(prepared.segment, params, settings);
    spdlog::info("{}: objective {} after {} iterations", id, r.objective, r.iterations);
    const auto P = MonthlySeries::dense(r.solution.start, r.solution.P);
    const auto R = MonthlySeries::dense(r.solution.start, r.solution.R);
    write_monthly_csv(dir / "P.csv", {"P"}, {P});
    write_monthly_csv(dir / "R.csv", {"R"}, {R});
    if (r.solution.P.size() >= 12) {
        write_monthly_csv(dir / "PD.csv", {"PD"}, {annualize(r.solution.P, r.solution.start).to_series()});
    } else {
        spdlog::warn("{}: fewer than 12 hazards, PD.csv not written", id);
    }

    Json report;
    report["segment"] = id;
    report["rr"] = num(params.rr);
    report["lambda"] = num(params.lambda);
    report["months"] = prepared.segment.size();
    report["imputed_months"] = prepared.filled_months;
    report["objective"] = num(r.objective);
    report["initial_objective"] = num(r.initial_objective);
    report["iterations"] = r.iterations;
    report["gradient_norm"] = num(r.gradient_norm);
    write_json(dir / "fit_report.json", report);
    return 0;
}

// ---- annualize -------------------------------------------------------------

struct AnnualizeOptions {
    std::string input;
    std::string column = "P";
};

int cmd_annualize(const Globals& g, const AnnualizeOptions& o) {
    const MonthlyTable t = load_monthly_table(o.input);
    const MonthlySeries& p = t.get(o.column);
    const std::vector<double> hazards = p.require_dense(o.input);
    const fs::path dir = out_dir(g);
    write_monthly_csv(dir / "PD.csv", {"PD"}, {annualize(hazards, p.start()).to_series()});
    return 0;
}

// ---- validate --------------------------------------------------------------

struct ValidateOptions {
    std::string pd;
    std::string reference;
    std::string column = "PD";
};

int cmd_validate(const Globals& g, const ValidateOptions& o) {
    fs::path ref_path = o.reference;
    if (ref_path.empty()) {
        const DatasetManifest m = require_manifest(g);
        require(m.reference_df.has_value(), ErrorKind::Input, "no reference series: pass --reference or set reference_df in the manifest");
        ref_path = *m.reference_df;
    }
    const AnnualPdSeries pd = read_pd_csv(o.pd, o.column);
    const ReferenceDfSeries ref = load_reference_df_csv(ref_path, "reference");
    const fs::path dir = out_dir(g);
    const ValidationReport v = validate(pd, ref);
    spdlog::info("validation R^2 = {} over {} months", v.r_squared, v.aligned_months);
    Json j;
    j["r_squared"] = num(v.r_squared);
    j["aligned_months"] = v.aligned_months;
    j["mean_model"] = num(v.mean_model);
    j["mean_reference"] = num(v.mean_reference);
    write_json(dir / "validation.json", j);
    return 0;
}

// ---- calibrate -------------------------------------------------------------

struct CalibrateOptions {
    std::string segment;
    std::optional<double> pd_ttc;
    std::string window_start;
    std::optional<int> extrema;
    std::optional<double> prominence;
    std::optional<double> rr_tolerance;
    std::string counting;
    bool parallel = false;
};

ExtremaCounting parse_counting(const std::string& s) {
    if (s.empty() || s == "both") return ExtremaCounting::Both;
    if (s == "min") return ExtremaCounting::MinOnly;
    if (s == "max") return ExtremaCounting::MaxOnly;
    fail(ErrorKind::Input, "counting must be both, min or max");
}

int cmd_calibrate(const Globals& g, const CalibrateOptions& o) {
    const DatasetManifest m = require_manifest(g);
    const std::string id = pick_segment(m, o.segment);
    const Json& c = cli::section(m.config, "calibration");
    const fs::path dir = out_dir(g);
    const auto prepared = cli::prepare_segment(m, id, cli::hp_params(m.config));

    CalibrationSpec spec;
    spec.pd_ttc = cli::pick(o.pd_ttc, c, "pd_ttc", "pd_ttc (--pd-ttc / config.calibration.pd_ttc)");
    const std::string window = !o.window_start.empty() ? o.window_start : cli::text(c, "window_start").value_or("12");
    spec.window_start_n = cli::window_start_n(window, prepared.segment.start());
    const auto target = o.extrema ? o.extrema : cli::integer(c, "target_extrema");
    require(target.has_value(), ErrorKind::Input, "target extrema count not given (--extrema / config.calibration.target_extrema)");
    spec.target_extrema_m = *target;
    if (c.contains("lambda_grid")) spec.lambda_grid = c.at("lambda_grid").get<std::vector<double>>();
    if (auto v = o.rr_tolerance ? o.rr_tolerance : cli::number(c, "rr_tolerance")) spec.rr_tolerance = *v;
    if (auto v = o.prominence ? o.prominence : cli::number(c, "prominence")) spec.prominence = *v;
    spec.counting = parse_counting(!o.counting.empty() ? o.counting : cli::text(c, "counting").value_or("both"));
    spec.parallel = o.parallel;

    Json j;
    j["segment"] = id;
    j["pd_ttc"] = num(spec.pd_ttc);
    j["window_start_n"] = spec.window_start_n;
    j["target_extrema"] = spec.target_extrema_m;
    try {
        const CalibrationResult r = calibrate(prepared.segment, spec, cli::solver_settings(m.config));
        j["status"] = "ok";
        j["selected"] = {{"rr", num(r.params.rr)}, {"lambda", num(r.params.lambda)}, {"mean_pd", num(r.achieved_mean_pd)},
                         {"extrema", r.achieved_extrema}};
        j["trace"] = trace_json(r.trace);
        write_json(dir / "calibration.json", j);
        spdlog::info("{}: RR = {}, lambda = {}", id, r.params.rr, r.params.lambda);
        return 0;
    } catch (const CalibrationFailure& e) {
        j["status"] = "failed";
        j["message"] = e.what();
        j["selected"] = nullptr;
        j["trace"] = trace_json(e.trace());
        write_json(dir / "calibration.json", j);
        std::string detail = e.what();
        for (const auto& row : e.trace()) {
            if (!row.error.empty()) {
                detail += "; e.g. " + row.error;
                break;
            }
        }
        throw Error(ErrorKind::Infeasible, detail);
    }
}

// ---- industry-batch --------------------------------------------------------

struct BatchOptions {
    std::optional<double> rr;
    std::optional<double> lambda;
    std::string from;
    std::string to;
};

std::string csv_safe(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

int cmd_industry_batch(const Globals& g, const BatchOptions& o) {
    const DatasetManifest m = require_manifest(g);
    require(!m.segments.empty(), ErrorKind::Input, "manifest lists no segments");
    const FilterParams params = cli::filter_params(m.config, o.rr, o.lambda);
    const SolverSettings settings = cli::solver_settings(m.config);
    const HpParams hp = cli::hp_params(m.config);
    const Json& b = cli::section(m.config, "batch");
    const std::string from = !o.from.empty() ? o.from : cli::text(b, "window_start").value_or("");
    const std::string to = !o.to.empty() ? o.to : cli::text(b, "window_end").value_or("");
    const fs::path dir = out_dir(g);

    std::ostringstream table;
    table << "segment_id,mean_pd,cv,months,status\n";
    for (const auto& id : m.segment_ids()) {
        try {
            const auto prepared = cli::prepare_segment(m, id, hp);
            const FilterResult r = solve(prepared.segment, params, settings);
            MonthlySeries pd = annualize(r.solution.P, r.solution.start).to_series();
            const MonthIndex lo = from.empty() ? pd.start() : std::max(pd.start(), MonthIndex::parse(from));
            const MonthIndex hi = to.empty() ? pd.last() : std::min(pd.last(), MonthIndex::parse(to));
            require(lo <= hi, ErrorKind::Input, "window does not overlap the PD series");
            pd = pd.slice(lo, hi);
            const MeanCv s = mean_and_cv(pd);
            table << id << ',' << format_number(s.mean) << ',' << format_number(s.cv) << ',' << pd.size() << ",ok\n";
        } catch (const Error& e) {
            spdlog::warn("{}: {}", id, e.what());
            table << id << ",,,,error: " << csv_safe(e.what()) << '\n';
        }
    }
    write_text_file(dir / "table.csv", table.str());
    return 0;
}

// ---- aggregate -------------------------------------------------------------

int cmd_aggregate(const Globals& g) {
    const DatasetManifest m = require_manifest(g);
    require(m.weights.has_value(), ErrorKind::Input, "manifest has no weights file");
    const std::vector<WeightEntry> weights = load_weights_csv(*m.weights);
    const fs::path dir = out_dir(g);

    std::vector<SegmentSeries> segs;
    double total = 0.0;
    for (const auto& w : weights) {
        const auto path = m.segment_path(w.segment_id);
        require(path.has_value(), ErrorKind::Input, "weights name unknown segment '" + w.segment_id + "'");
        segs.push_back(load_segment_csv(*path, w.segment_id));
        total += w.weight;
    }
    MonthIndex from = segs.front().start();
    MonthIndex to = segs.front().E.last();
    for (const auto& s : segs) {
        from = std::max(from, s.start());
        to = std::min(to, s.E.last());
    }
    require(from <= to, ErrorKind::Input, "weighted segments share no common months");

    std::vector<MonthlySeries> es, npls;
    std::vector<double> normalized;
    Json members = Json::array();
    for (std::size_t k = 0; k < segs.size(); ++k) {
        es.push_back(segs[k].E.slice(from, to));
        npls.push_back(segs[k].NPL.slice(from, to));
        normalized.push_back(weights[k].weight / total);
        members.push_back({{"segment_id", weights[k].segment_id}, {"weight", num(weights[k].weight)}, {"normalized", num(normalized.back())}});
    }
    const SegmentSeries agg = SegmentSeries::make("aggregate", weighted_sum(es, normalized), weighted_sum(npls, normalized));
    write_segment_csv(dir / "aggregate.csv", agg);
    Json j;
    j["weight_sum"] = num(total);
    j["normalized"] = true;
    j["start"] = from.to_string();
    j["end"] = to.to_string();
    j["segments"] = members;
    write_json(dir / "aggregate.json", j);
    return 0;
}

// ---- regress ---------------------------------------------------------------

struct RegressOptions {
    std::string pd;
    std::string column = "PD";
    std::string factors;
    std::string scenario;
    std::string target;
};

double logit(double p) {
    require(p > 0.0 && p < 1.0, ErrorKind::Input, "logit target needs PD strictly inside (0,1)");
    return std::log(p / (1.0 - p));
}

int cmd_regress(const Globals& g, const RegressOptions& o) {
    std::optional<DatasetManifest> m;
    if (!g.manifest.empty()) m = load_manifest(g.manifest);
    const Json config = m ? m->config : Json::object();
    const Json& macro = cli::section(config, "macro");

    fs::path factor_path = o.factors;
    if (factor_path.empty()) {
        require(m && m->factors, ErrorKind::Input, "no factor file: pass --factors or set factors in the manifest");
        factor_path = *m->factors;
    }
    const std::string target = !o.target.empty() ? o.target : cli::text(macro, "target").value_or("level");
    require(target == "level" || target == "logit", ErrorKind::Input, "target must be level or logit");
    std::map<std::string, int> lags;
    if (macro.contains("lags")) lags = macro.at("lags").get<std::map<std::string, int>>();

    const MonthlyTable pdt = load_monthly_table(o.pd);
    MonthlySeries y = pdt.get(o.column);
    if (target == "logit") {
        std::vector<Observation> v(y.values());
        for (auto& x : v) if (x) x = logit(*x);
        y = MonthlySeries(y.start(), std::move(v));
    }
    const MonthlyTable ft = load_monthly_table(factor_path);
    std::vector<std::pair<std::string, MonthlySeries>> factors;
    for (std::size_t j = 0; j < ft.columns.size(); ++j) factors.emplace_back(ft.columns[j], ft.series[j]);
    const fs::path dir = out_dir(g);

    const AssembledRegression a = assemble(y, factors, lags);
    const RegressionReport r = fit_ols(a.X, a.y);

    std::ostringstream coef;
    coef << "name,coefficient\n";
    for (std::size_t k = 0; k < r.names.size(); ++k) coef << r.names[k] << ',' << format_number(r.coefficients[k]) << '\n';
    write_text_file(dir / "coefficients.csv", coef.str());

    std::ostringstream res;
    res << "month,residual\n";
    for (std::size_t i = 0; i < a.months.size(); ++i) res << a.months[i].to_string() << ',' << format_number(r.residuals[i]) << '\n';
    write_text_file(dir / "residuals.csv", res.str());

    Json j;
    j["target"] = target;
    j["observations"] = a.y.size();
    j["first_month"] = a.months.front().to_string();
    j["last_month"] = a.months.back().to_string();
    j["r_squared"] = num(r.r_squared);
    j["bp_statistic"] = num(r.bp_statistic);
    j["bp_p_value"] = num(r.bp_p_value);
    j["bp_dof"] = a.X.columns();
    Json coefs = Json::object();
    for (std::size_t k = 0; k < r.names.size(); ++k) coefs[r.names[k]] = num(r.coefficients[k]);
    j["coefficients"] = coefs;
    j["lags"] = lags;
    write_json(dir / "regression.json", j);

    if (!o.scenario.empty()) {
        const MonthlyTable st = load_monthly_table(o.scenario);
        // Scenario months extend the factor history so that lags reach back into it.
        std::vector<std::pair<std::string, MonthlySeries>> extended;
        MonthIndex first_scenario = st.series.front().start();
        for (const auto& [name, hist] : factors) {
            const MonthlySeries& sc = st.get(name);
            const MonthIndex lo = std::min(hist.start(), sc.start());
            const MonthIndex hi = std::max(hist.last(), sc.last());
            std::vector<Observation> v;
            for (MonthIndex mm = lo; mm <= hi; mm = mm.next()) {
                const Observation s = sc.at(mm);
                v.push_back(s ? s : hist.at(mm));
            }
            extended.emplace_back(name, MonthlySeries(lo, std::move(v)));
        }
        std::vector<Observation> placeholder;
        const MonthlySeries& sc0 = st.series.front();
        for (std::size_t i = 0; i < sc0.size(); ++i) placeholder.emplace_back(0.0);
        const AssembledRegression fa = assemble(MonthlySeries(first_scenario, placeholder), extended, lags);
        const std::vector<double> z = predict(r, fa.X);
        std::ostringstream fc;
        fc << "month,PD\n";
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double v = target == "logit" ? 1.0 / (1.0 + std::exp(-z[i])) : z[i];
            fc << fa.months[i].to_string() << ',' << format_number(v) << '\n';
        }
        write_text_file(dir / "forecast.csv", fc.str());
    }
    return 0;
}

// ---- simulate --------------------------------------------------------------

struct SimulateOptions {
    std::optional<int> months;
    std::optional<double> noise;
    std::optional<std::uint64_t> seed;
};

int cmd_simulate(const Globals& g, const SimulateOptions& o) {
    Json config = Json::object();
    if (!g.manifest.empty()) config = load_manifest(g.manifest).config;
    synth::SynthSpec spec = cli::synth_spec(config);
    if (o.months) spec.months = *o.months;
    if (o.noise || o.seed) {
        double rr = 0.0;
        if (const auto* c = std::get_if<synth::ConstantR>(&spec.R)) rr = c->rr;
        else rr = std::get<synth::NoisyR>(spec.R).rr;
        synth::NoisyR n{rr, o.noise.value_or(0.05), o.seed.value_or(1)};
        if (const auto* prev = std::get_if<synth::NoisyR>(&spec.R)) {
            if (!o.noise) n.amplitude = prev->amplitude;
            if (!o.seed) n.seed = prev->seed;
        }
        spec.R = n;
    }
    const synth::SynthBundle b = synth::generate(spec);
    const fs::path dir = out_dir(g);
    write_segment_csv(dir / "segment.csv", b.segment);

    const std::size_t n = b.segment.size();
    std::vector<Observation> p(n), r(n), pd(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        p[i] = b.truth.P[i];
        r[i] = b.truth.R[i];
    }
    for (std::size_t j = 0; j < b.true_annual_pd.PD.size(); ++j) pd[j + 11] = b.true_annual_pd.PD[j];
    write_monthly_csv(dir / "truth.csv", {"P", "R", "PD"},
                      {MonthlySeries(spec.start, p), MonthlySeries(spec.start, r), MonthlySeries(spec.start, pd)});

    Json manifest;
    manifest["segments"] = {{spec.segment_id, "segment.csv"}};
    Json cfg;
    double rr = 0.0;
    if (const auto* c = std::get_if<synth::ConstantR>(&spec.R)) rr = c->rr;
    else rr = std::get<synth::NoisyR>(spec.R).rr;
    cfg["filter"] = {{"rr", num(rr)}, {"lambda", 1.0}};
    if (!b.true_annual_pd.PD.empty()) {
        write_monthly_csv(dir / "reference_df.csv", {"DF"}, {b.true_annual_pd.to_series()});
        manifest["reference_df"] = "reference_df.csv";
        const CalibrationSpec defaults;
        cfg["calibration"] = {{"pd_ttc", num(window_mean_pd(b.true_annual_pd, 12))},
                              {"window_start", 12},
                              {"target_extrema", count_extrema(b.true_annual_pd, defaults.prominence).count()}};
    }
    manifest["config"] = cfg;
    write_json(dir / "manifest.json", manifest);
    return 0;
}

// ---- plot ------------------------------------------------------------------

struct PlotOptions {
    std::string input;
    std::string column = "PD";
    std::string reference;
    std::string reference_column = "DF";
    std::string title = "Probability of default";
};

int cmd_plot(const Globals& g, const PlotOptions& o) {
    std::vector<PlotLine> lines;
    lines.push_back({o.column, load_monthly_table(o.input).get(o.column)});
    if (!o.reference.empty()) lines.push_back({o.reference_column, load_monthly_table(o.reference).get(o.reference_column)});
    const fs::path dir = out_dir(g);
    write_text_file(dir / "plot.svg", render_svg_line_chart(lines, o.title));
    write_text_file(dir / "plot.dat", render_gnuplot_data(lines));
    return 0;
}

void configure_logging(const std::string& level) {
    auto logger = spdlog::stderr_color_st("quasipd");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    const auto lvl = spdlog::level::from_str(level);
    spdlog::set_level(lvl);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasi-PD filtering toolkit: monthly default hazards and annual PD from total and overdue debt"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--manifest", g.manifest, "Dataset manifest (JSON)");
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error or off")->capture_default_str();

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "Filter one segment at fixed RR and lambda");
    fit_cmd->add_option("--segment", fit.segment, "Segment id from the manifest");
    fit_cmd->add_option("--rr", fit.rr, "Long-run recovery share RR");
    fit_cmd->add_option("--lambda", fit.lambda, "Recovery penalty weight");

    CalibrateOptions cal;
    auto* cal_cmd = app.add_subcommand("calibrate", "Fit RR and lambda to a TTC anchor and an extrema count");
    cal_cmd->add_option("--segment", cal.segment, "Segment id from the manifest");
    cal_cmd->add_option("--pd-ttc", cal.pd_ttc, "Through-the-cycle PD anchor");
    cal_cmd->add_option("--window-start", cal.window_start, "Averaging window start: month number n or YYYY-MM");
    cal_cmd->add_option("--extrema", cal.extrema, "Target number of PD extrema");
    cal_cmd->add_option("--prominence", cal.prominence, "Minimum PD swing for an extremum");
    cal_cmd->add_option("--rr-tolerance", cal.rr_tolerance, "Tolerance on the window mean PD");
    cal_cmd->add_option("--counting", cal.counting, "Which extrema to count: both, min or max");
    cal_cmd->add_flag("--parallel", cal.parallel, "Fit lambda grid points concurrently");

    AnnualizeOptions ann;
    auto* ann_cmd = app.add_subcommand("annualize", "Compound monthly hazards into a rolling annual PD");
    ann_cmd->add_option("--input", ann.input, "CSV with month and hazard columns")->required();
    ann_cmd->add_option("--column", ann.column, "Hazard column")->capture_default_str();

    ValidateOptions val;
    auto* val_cmd = app.add_subcommand("validate", "Compare a PD series with observed default frequencies");
    val_cmd->add_option("--pd", val.pd, "PD CSV (month,PD)")->required();
    val_cmd->add_option("--reference", val.reference, "Reference CSV (month,DF); defaults to the manifest's reference_df");
    val_cmd->add_option("--column", val.column, "PD column")->capture_default_str();

    BatchOptions batch;
    auto* batch_cmd = app.add_subcommand("industry-batch", "Mean PD and coefficient of variation for every segment");
    batch_cmd->add_option("--rr", batch.rr, "Frozen RR from the aggregate calibration");
    batch_cmd->add_option("--lambda", batch.lambda, "Frozen lambda from the aggregate calibration");
    batch_cmd->add_option("--from", batch.from, "First month of the statistics window (YYYY-MM)");
    batch_cmd->add_option("--to", batch.to, "Last month of the statistics window (YYYY-MM)");

    auto* agg_cmd = app.add_subcommand("aggregate", "Portfolio-weighted E and NPL from segment series");

    RegressOptions reg;
    auto* reg_cmd = app.add_subcommand("regress", "OLS macro model of a PD series with Breusch-Pagan diagnostics");
    reg_cmd->add_option("--pd", reg.pd, "PD CSV (month,PD)")->required();
    reg_cmd->add_option("--column", reg.column, "PD column")->capture_default_str();
    reg_cmd->add_option("--factors", reg.factors, "Macro factor CSV; defaults to the manifest's factors");
    reg_cmd->add_option("--scenario", reg.scenario, "Scenario factor CSV to evaluate the fitted model on");
    reg_cmd->add_option("--target", reg.target, "level or logit");

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic segment with known hazards");
    sim_cmd->add_option("--months", sim.months, "Number of months");
    sim_cmd->add_option("--noise", sim.noise, "Amplitude of seeded recovery noise");
    sim_cmd->add_option("--seed", sim.seed, "Seed of the recovery noise");

    PlotOptions plot;
    auto* plot_cmd = app.add_subcommand("plot", "SVG line chart and gnuplot data of a PD series");
    plot_cmd->add_option("--input", plot.input, "CSV with a month column")->required();
    plot_cmd->add_option("--column", plot.column, "Column to plot")->capture_default_str();
    plot_cmd->add_option("--reference", plot.reference, "Optional overlay CSV");
    plot_cmd->add_option("--reference-column", plot.reference_column, "Overlay column")->capture_default_str();
    plot_cmd->add_option("--title", plot.title, "Chart title");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ErrorKind::Input);
    }

    try {
        configure_logging(g.log_level);
        if (*fit_cmd) return cmd_fit(g, fit);
        if (*cal_cmd) return cmd_calibrate(g, cal);
        if (*ann_cmd) return cmd_annualize(g, ann);
        if (*val_cmd) return cmd_validate(g, val);
        if (*batch_cmd) return cmd_industry_batch(g, batch);
        if (*agg_cmd) return cmd_aggregate(g);
        if (*reg_cmd) return cmd_regress(g, reg);
        if (*sim_cmd) return cmd_simulate(g, sim);
        if (*plot_cmd) return cmd_plot(g, plot);
    } catch (const Error& e) {
        spdlog::error("{}", e.what());
        return e.exit_code();
    } catch (const nlohmann::json::exception& e) {
        spdlog::error("configuration: {}", e.what());
        return static_cast<int>(ErrorKind::Input);
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return static_cast<int>(ErrorKind::Numerical);
    }
    return static_cast<int>(ErrorKind::Input);
}
