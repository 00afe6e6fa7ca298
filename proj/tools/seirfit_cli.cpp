/* Copyright 2026 seirfit contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// seirfit: SEIR epidemic simulation, calibration and evaluation pipeline.
//
// Subcommands: simulate, fit, evaluate, plotdata, ingest.
// Exit codes: 0 success, 2 config/input error, 3 simulation error,
// 4 fit error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "seirfit/dates.hpp"
#include "seirfit/fitting.hpp"
#include "seirfit/ingest.hpp"
#include "seirfit/integrator.hpp"
#include "seirfit/metrics.hpp"
#include "seirfit/model.hpp"
#include "seirfit/plot.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace seirfit;

namespace {

constexpr const char* kToolVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSimulation = 3;
constexpr int kExitFit = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open file: " + path.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& path, const std::string& content)
{
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path.string());
    }
    out << content;
}

std::string fmt_num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct RunConfig {
    PopulationConfig pop{1.38e9, PopulationConfig::default_beds(1.38e9)};
    bool beds_defaulted = true;
    FixedRates rates;
    std::vector<ParamSpec> specs = default_param_specs();
    std::vector<double> explicit_values; // "value" column, for simulate
    std::string jhu_csv;
    std::string country = "India";
    std::string vaccination_csv;
    std::string observed_csv;
    SeriesKind target = SeriesKind::cumulative_deaths;
    int substeps_per_day = 4;
    long horizon_days = 585;
    double seed_exposed = -1.0;
    Date start_date = parse_iso_date("2020-01-22");
    std::string output_dir = "out";
    FitOptions fit_options;
};

double get_or(const json& j, const char* key, double fallback)
{
    return j.contains(key) && !j[key].is_null() ? j[key].get<double>() : fallback;
}

RunConfig load_config(const std::string& path)
{
    RunConfig cfg;
    if (path.empty()) {
        for (const auto& s : cfg.specs) {
            cfg.explicit_values.push_back(s.initial_value);
        }
        return cfg;
    }
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }

    if (j.contains("population")) {
        const auto& p = j["population"];
        cfg.pop.n = get_or(p, "n", cfg.pop.n);
        if (p.contains("beds_0") && !p["beds_0"].is_null()) {
            cfg.pop.beds_0 = p["beds_0"].get<double>();
            cfg.beds_defaulted = false;
        } else {
            cfg.pop.beds_0 = PopulationConfig::default_beds(cfg.pop.n);
        }
    }
    if (j.contains("rates")) {
        const auto& r = j["rates"];
        cfg.rates.sigma = get_or(r, "sigma", cfg.rates.sigma);
        cfg.rates.gamma = get_or(r, "gamma", cfg.rates.gamma);
        cfg.rates.days_i_to_c = get_or(r, "days_i_to_c", cfg.rates.days_i_to_c);
        cfg.rates.days_c_to_d = get_or(r, "days_c_to_d", cfg.rates.days_c_to_d);
        cfg.rates.days_c_to_r = get_or(r, "days_c_to_r", cfg.rates.days_c_to_r);
        cfg.rates.reinfection_fraction = get_or(r, "rsus", cfg.rates.reinfection_fraction);
        cfg.rates.immunity_lag_days =
            static_cast<int>(get_or(r, "immunity_lag_days", cfg.rates.immunity_lag_days));
    }
    if (j.contains("parameters")) {
        cfg.specs.clear();
        cfg.explicit_values.clear();
        for (const auto& p : j["parameters"]) {
            ParamSpec s;
            s.name = p.at("name").get<std::string>();
            s.min = get_or(p, "min", 0.0);
            s.max = get_or(p, "max", 1.0);
            s.initial_value = get_or(p, "initial", 0.5 * (s.min + s.max));
            s.vary = p.contains("vary") ? p["vary"].get<bool>() : true;
            cfg.specs.push_back(s);
            cfg.explicit_values.push_back(get_or(p, "value", s.initial_value));
        }
    } else {
        for (const auto& s : cfg.specs) {
            cfg.explicit_values.push_back(s.initial_value);
        }
    }
    if (j.contains("data")) {
        const auto& d = j["data"];
        if (d.contains("jhu_csv")) {
            cfg.jhu_csv = d["jhu_csv"].get<std::string>();
        }
        if (d.contains("country")) {
            cfg.country = d["country"].get<std::string>();
        }
        if (d.contains("vaccination_csv")) {
            cfg.vaccination_csv = d["vaccination_csv"].get<std::string>();
        }
        if (d.contains("observed_csv")) {
            cfg.observed_csv = d["observed_csv"].get<std::string>();
        }
    }
    if (j.contains("target")) {
        cfg.target = series_kind_from_string(j["target"].get<std::string>());
    }
    if (j.contains("integrator")) {
        const auto& i = j["integrator"];
        cfg.substeps_per_day = static_cast<int>(get_or(i, "substeps_per_day", 4));
        cfg.horizon_days = static_cast<long>(get_or(i, "horizon_days", 585));
        cfg.seed_exposed = get_or(i, "seed_exposed", -1.0);
    }
    if (j.contains("fit")) {
        const auto& f = j["fit"];
        auto& o = cfg.fit_options;
        o.fd_relative_step = get_or(f, "fd_relative_step", o.fd_relative_step);
        o.fd_absolute_floor = get_or(f, "fd_absolute_floor", o.fd_absolute_floor);
        o.ftol = get_or(f, "ftol", o.ftol);
        o.gtol = get_or(f, "gtol", o.gtol);
        o.xtol = get_or(f, "xtol", o.xtol);
        o.max_evals_per_vary =
            static_cast<int>(get_or(f, "max_evals_per_vary", o.max_evals_per_vary));
        o.lambda_init_factor = get_or(f, "lambda_init_factor", o.lambda_init_factor);
        o.max_step = get_or(f, "max_step", o.max_step);
        o.u_limit = get_or(f, "u_limit", o.u_limit);
    }
    if (j.contains("start_date")) {
        cfg.start_date = parse_iso_date(j["start_date"].get<std::string>());
    }
    if (j.contains("output_dir")) {
        cfg.output_dir = j["output_dir"].get<std::string>();
    }
    return cfg;
}

void validate_config(const RunConfig& cfg)
{
    if (!(cfg.pop.n > 0.0)) {
        throw ConfigError("population n must be positive");
    }
    for (const auto& s : cfg.specs) {
        try {
            s.validate();
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
    for (const std::string& p : {cfg.jhu_csv, cfg.vaccination_csv, cfg.observed_csv}) {
        if (!p.empty() && !fs::exists(p)) {
            throw ConfigError("referenced data file does not exist: " + p);
        }
    }
    if (cfg.substeps_per_day < 1) {
        throw ConfigError("substeps_per_day must be >= 1");
    }
    if (cfg.horizon_days < 1) {
        throw ConfigError("horizon_days must be >= 1");
    }
}

json config_to_json(const RunConfig& cfg)
{
    json j;
    j["population"] = {{"n", cfg.pop.n}, {"beds_0", cfg.pop.beds_0}};
    j["rates"] = {{"sigma", cfg.rates.sigma},
                  {"gamma", cfg.rates.gamma},
                  {"days_i_to_c", cfg.rates.days_i_to_c},
                  {"days_c_to_d", cfg.rates.days_c_to_d},
                  {"days_c_to_r", cfg.rates.days_c_to_r},
                  {"rsus", cfg.rates.reinfection_fraction},
                  {"immunity_lag_days", cfg.rates.immunity_lag_days}};
    j["parameters"] = json::array();
    for (std::size_t i = 0; i < cfg.specs.size(); ++i) {
        const auto& s = cfg.specs[i];
        j["parameters"].push_back({{"name", s.name},
                                   {"value", cfg.explicit_values[i]},
                                   {"initial", s.initial_value},
                                   {"min", s.min},
                                   {"max", s.max},
                                   {"vary", s.vary}});
    }
    j["data"] = {{"jhu_csv", cfg.jhu_csv},
                 {"country", cfg.country},
                 {"vaccination_csv", cfg.vaccination_csv},
                 {"observed_csv", cfg.observed_csv}};
    j["target"] = to_string(cfg.target);
    j["integrator"] = {{"substeps_per_day", cfg.substeps_per_day},
                       {"horizon_days", cfg.horizon_days},
                       {"seed_exposed", cfg.seed_exposed}};
    j["fit"] = {{"fd_relative_step", cfg.fit_options.fd_relative_step},
                {"fd_absolute_floor", cfg.fit_options.fd_absolute_floor},
                {"ftol", cfg.fit_options.ftol},
                {"gtol", cfg.fit_options.gtol},
                {"xtol", cfg.fit_options.xtol},
                {"max_evals_per_vary", cfg.fit_options.max_evals_per_vary},
                {"lambda_init_factor", cfg.fit_options.lambda_init_factor},
                {"max_step", cfg.fit_options.max_step},
                {"u_limit", cfg.fit_options.u_limit}};
    j["start_date"] = format_iso(cfg.start_date);
    j["output_dir"] = cfg.output_dir;
    return j;
}

json resolved_defaults(const RunConfig& cfg)
{
    return {{"sigma", cfg.rates.sigma},
            {"gamma", cfg.rates.gamma},
            {"beds_0", cfg.pop.beds_0},
            {"beds_0_defaulted", cfg.beds_defaulted},
            {"substeps_per_day", cfg.substeps_per_day},
            {"seed_exposed",
             cfg.seed_exposed >= 0.0 ? cfg.seed_exposed : std::max(1.0, cfg.pop.n / 1.0e6)},
            {"lm", {{"fd_relative_step", cfg.fit_options.fd_relative_step},
                    {"fd_absolute_floor", cfg.fit_options.fd_absolute_floor},
                    {"ftol", cfg.fit_options.ftol},
                    {"gtol", cfg.fit_options.gtol},
                    {"xtol", cfg.fit_options.xtol},
                    {"max_evals_per_vary", cfg.fit_options.max_evals_per_vary},
                    {"lambda_init_factor", cfg.fit_options.lambda_init_factor},
                    {"max_step", cfg.fit_options.max_step},
                    {"u_limit", cfg.fit_options.u_limit}}}};
}

void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& cfg,
                    const json& results = json())
{
    json m;
    m["tool"] = "seirfit";
    m["version"] = kToolVersion;
    m["command"] = command;
    m["config"] = config_to_json(cfg);
    m["resolved_defaults"] = resolved_defaults(cfg);
    if (!results.is_null()) {
        m["results"] = results;
    }
    write_file(dir / "manifest.json", m.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Series loading
// ---------------------------------------------------------------------------

ObservedSeries load_observed(const RunConfig& cfg, json& ingest_report)
{
    ObservedSeries obs;
    obs.kind = cfg.target;
    if (!cfg.observed_csv.empty()) {
        // Plain series file: header then one value per row, optionally
        // preceded by a day or date column (last column wins).
        std::istringstream in(read_file(cfg.observed_csv));
        std::string line;
        bool first = true;
        obs.start_date = cfg.start_date;
        while (std::getline(in, line)) {
            if (line.empty() || line == "\r") {
                continue;
            }
            const auto fields = split_csv_line(line);
            const std::string& cell = fields.back();
            if (first) {
                first = false;
                try {
                    (void)std::stod(cell);
                } catch (const std::exception&) {
                    continue; // header row
                }
            }
            obs.values.push_back(std::stod(cell));
        }
        if (obs.values.empty()) {
            throw ConfigError("observed series file is empty: " + cfg.observed_csv);
        }
        return obs;
    }
    if (cfg.jhu_csv.empty()) {
        throw ConfigError("fit needs either data.observed_csv or data.jhu_csv in the config");
    }
    CountrySeries series = parse_jhu_timeseries(read_file(cfg.jhu_csv), cfg.country);
    CleanResult cleaned = clean_cumulative(series.values);
    ingest_report["cleaned_adjustments"] = cleaned.adjusted;
    ingest_report["source_rows"] = series.values.size();
    obs.start_date = series.start_date;
    if (cfg.target == SeriesKind::daily_deaths) {
        obs.values.resize(cleaned.values.size());
        for (std::size_t i = 0; i < cleaned.values.size(); ++i) {
            obs.values[i] = i == 0 ? cleaned.values[0] : cleaned.values[i] - cleaned.values[i - 1];
        }
    } else {
        obs.values = cleaned.values;
    }
    return obs;
}

VaccinationSchedule load_vaccination(const RunConfig& cfg, Date sim_start)
{
    if (cfg.vaccination_csv.empty()) {
        return VaccinationSchedule::none();
    }
    const auto records = parse_vaccination_csv(read_file(cfg.vaccination_csv));
    return vaccination_schedule_from_records(records, sim_start, cfg.rates.immunity_lag_days);
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

std::string trajectory_csv(const Trajectory& traj, Date start)
{
    std::ostringstream os;
    os << "day,date,S,E,I,C,R,D,daily_deaths,R0,beta,beds\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& y = traj.states[i];
        const long day = static_cast<long>(traj.days[i]);
        os << day << ',' << format_iso(start + std::chrono::days{day}) << ','
           << fmt_num(y.susceptible) << ',' << fmt_num(y.exposed) << ',' << fmt_num(y.infected)
           << ',' << fmt_num(y.critical) << ',' << fmt_num(y.recovered) << ',' << fmt_num(y.dead)
           << ',' << fmt_num(traj.daily_deaths[i]) << ',' << fmt_num(traj.r0[i]) << ','
           << fmt_num(traj.beta[i]) << ',' << fmt_num(traj.beds[i]) << '\n';
    }
    return os.str();
}

int cmd_simulate(const RunConfig& cfg)
{
    const fs::path out(cfg.output_dir);
    write_manifest(out, "simulate", cfg);

    const FitParameters fit = [&] {
        std::vector<std::string> names;
        for (const auto& s : cfg.specs) {
            names.push_back(s.name);
        }
        return params_from_named(names, cfg.explicit_values);
    }();

    SimulateOptions opts;
    opts.substeps_per_day = cfg.substeps_per_day;
    opts.seed_exposed = cfg.seed_exposed;
    const VaccinationSchedule vacc = load_vaccination(cfg, cfg.start_date);

    Trajectory traj;
    try {
        traj = simulate(fit, cfg.rates, cfg.pop, vacc, cfg.horizon_days, opts);
    } catch (const IntegrationError& e) {
        std::cerr << "simulation failed: " << e.what() << "\n";
        return kExitSimulation;
    }

    write_file(out / "trajectory.csv", trajectory_csv(traj, cfg.start_date));
    write_manifest(out, "simulate", cfg,
                   json{{"horizon_days", cfg.horizon_days},
                        {"final_cumulative_deaths", traj.states.back().dead}});
    return kExitOk;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

json fit_result_json(const FitResult& r)
{
    json params = json::object();
    for (std::size_t i = 0; i < r.names.size(); ++i) {
        params[r.names[i]] = r.values[i];
    }
    return {{"method", "least_squares"},
            {"n_function_evals", r.n_function_evals},
            {"n_data", r.n_data},
            {"n_varys", r.n_varys},
            {"chi_square", r.chi_square},
            {"reduced_chi_square", r.reduced_chi_square},
            {"aic", r.aic},
            {"bic", r.bic},
            {"convergence_status", r.convergence_status},
            {"params", params}};
}

int cmd_fit(const RunConfig& cfg)
{
    const fs::path out(cfg.output_dir);
    write_manifest(out, "fit", cfg);

    json ingest_report;
    const ObservedSeries observed = load_observed(cfg, ingest_report);

    ModelContext ctx;
    ctx.rates = cfg.rates;
    ctx.pop = cfg.pop;
    ctx.vaccination = load_vaccination(cfg, observed.start_date);
    ctx.sim.substeps_per_day = cfg.substeps_per_day;
    ctx.sim.seed_exposed = cfg.seed_exposed;

    FitResult result;
    try {
        result = fit_seir(cfg.specs, observed, ctx, cfg.fit_options);
    } catch (const std::exception& e) {
        std::cerr << "fit failed: " << e.what() << "\n";
        return kExitFit;
    }

    const FitParameters best = params_from_named(result.names, result.values);
    const std::vector<double> model =
        model_series(best, ctx, observed.kind, observed.values.size());

    std::ostringstream curve;
    curve << "day,observed,model\n";
    for (std::size_t k = 0; k < observed.values.size(); ++k) {
        curve << k << ',' << fmt_num(observed.values[k]) << ',' << fmt_num(model[k]) << '\n';
    }

    json fit_json = fit_result_json(result);
    if (!ingest_report.is_null()) {
        fit_json["ingest"] = ingest_report;
    }
    write_file(out / "fit.json", fit_json.dump(2) + "\n");
    write_file(out / "fitted_vs_observed.csv", curve.str());
    write_manifest(out, "fit", cfg, fit_json);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

std::vector<double> read_value_series(const fs::path& path)
{
    std::istringstream in(read_file(path));
    std::string line;
    std::vector<double> values;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_csv_line(line);
        const std::string& cell = fields.back();
        if (first) {
            first = false;
            try {
                (void)std::stod(cell);
            } catch (const std::exception&) {
                continue;
            }
        }
        values.push_back(std::stod(cell));
    }
    return values;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& observed_path,
                 const std::string& predicted_path, int n_varys)
{
    const fs::path out(cfg.output_dir);
    for (const auto& p : {observed_path, predicted_path}) {
        if (!fs::exists(p)) {
            std::cerr << "input file does not exist: " << p << "\n";
            return kExitConfig;
        }
    }
    write_manifest(out, "evaluate", cfg);

    const std::vector<double> observed = read_value_series(observed_path);
    const std::vector<double> predicted = read_value_series(predicted_path);

    MetricsReport report;
    try {
        report = evaluate(observed, predicted, static_cast<std::size_t>(n_varys));
    } catch (const std::exception& e) {
        std::cerr << "evaluate failed: " << e.what() << "\n";
        return kExitConfig;
    }

    json metrics = json::object();
    std::ostringstream csv;
    csv << "metric,value\n";
    for (const auto& [name, value] : report.entries()) {
        metrics[name] = value;
        csv << name << ',' << fmt_num(value) << '\n';
    }
    write_file(out / "metrics.json", metrics.dump(2) + "\n");
    write_file(out / "metrics.csv", csv.str());
    write_manifest(out, "evaluate", cfg,
                   json{{"metrics", metrics},
                        {"n_varys", n_varys},
                        {"observed", observed_path},
                        {"predicted", predicted_path}});
    return kExitOk;
}

// ---------------------------------------------------------------------------
// plotdata
// ---------------------------------------------------------------------------

int cmd_plotdata(const RunConfig& cfg, const std::string& input_path, bool emit_svg)
{
    const fs::path out(cfg.output_dir);
    if (!fs::exists(input_path)) {
        std::cerr << "input file does not exist: " << input_path << "\n";
        return kExitConfig;
    }
    write_manifest(out, "plotdata", cfg);

    std::istringstream in(read_file(input_path));
    std::string line;
    if (!std::getline(in, line)) {
        std::cerr << "empty input file: " << input_path << "\n";
        return kExitConfig;
    }
    const std::vector<std::string> header = split_csv_line(line);

    // the x column is "day" when present, otherwise the row index
    std::size_t day_col = header.size();
    std::vector<std::size_t> value_cols;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "day") {
            day_col = i;
        } else if (header[i] != "date") {
            value_cols.push_back(i);
        }
    }
    if (value_cols.empty()) {
        std::cerr << "no value columns in input\n";
        return kExitConfig;
    }

    std::vector<double> days;
    std::vector<PlotSeries> series(value_cols.size());
    for (std::size_t i = 0; i < value_cols.size(); ++i) {
        series[i].name = header[value_cols[i]];
    }
    std::size_t row_idx = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            std::cerr << "malformed row in " << input_path << "\n";
            return kExitConfig;
        }
        days.push_back(day_col < header.size() ? std::stod(fields[day_col])
                                               : static_cast<double>(row_idx));
        for (std::size_t i = 0; i < value_cols.size(); ++i) {
            series[i].values.push_back(std::stod(fields[value_cols[i]]));
        }
        ++row_idx;
    }
    if (days.empty()) {
        std::cerr << "input has no data rows\n";
        return kExitConfig;
    }

    std::ostringstream longcsv;
    longcsv << "series,day,value\n";
    for (const auto& s : series) {
        for (std::size_t i = 0; i < days.size(); ++i) {
            longcsv << csv_quote_if_needed(s.name) << ',' << fmt_num(days[i]) << ','
                    << fmt_num(s.values[i]) << '\n';
        }
    }
    write_file(out / "plotdata.csv", longcsv.str());

    if (emit_svg) {
        if (days.size() < 2) {
            std::cerr << "need at least two rows for an SVG chart\n";
            return kExitConfig;
        }
        write_file(out / "plot.svg", svg_line_chart(days, series, "day", "value"));
    }
    write_manifest(out, "plotdata", cfg,
                   json{{"input", input_path},
                        {"n_series", series.size()},
                        {"n_rows", days.size()},
                        {"svg", emit_svg}});
    return kExitOk;
}

// ---------------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------------

int cmd_ingest(const RunConfig& cfg)
{
    const fs::path out(cfg.output_dir);
    write_manifest(out, "ingest", cfg);
    json report;

    if (!cfg.jhu_csv.empty()) {
        const CountrySeries series = parse_jhu_timeseries(read_file(cfg.jhu_csv), cfg.country);
        const CleanResult cleaned = clean_cumulative(series.values);
        std::ostringstream os;
        os << "day,date,value\n";
        for (std::size_t i = 0; i < cleaned.values.size(); ++i) {
            os << i << ',' << format_iso(series.start_date + std::chrono::days{static_cast<long>(i)})
               << ',' << fmt_num(cleaned.values[i]) << '\n';
        }
        write_file(out / "series.csv", os.str());
        report["series"] = {{"country", cfg.country},
                            {"start_date", format_iso(series.start_date)},
                            {"n_days", cleaned.values.size()},
                            {"cleaned_adjustments", cleaned.adjusted}};
    }
    if (!cfg.vaccination_csv.empty()) {
        const auto records = parse_vaccination_csv(read_file(cfg.vaccination_csv));
        const VaccinationSchedule sched = vaccination_schedule_from_records(
            records, cfg.start_date, cfg.rates.immunity_lag_days);
        std::ostringstream os;
        os << "day,daily_doses,effective_rate\n";
        const long last = sched.start_day + static_cast<long>(sched.daily_doses.size()) +
                          sched.lag_days;
        for (long day = sched.start_day; day < last; ++day) {
            const long idx = day - sched.start_day;
            const double doses =
                idx >= 0 && idx < static_cast<long>(sched.daily_doses.size())
                    ? sched.daily_doses[static_cast<std::size_t>(idx)]
                    : 0.0;
            os << day << ',' << fmt_num(doses) << ','
               << fmt_num(sched.effective_rate(static_cast<double>(day))) << '\n';
        }
        write_file(out / "vaccination_daily.csv", os.str());
        report["vaccination"] = {{"weeks", records.size()},
                                 {"total_doses", sched.total_doses()},
                                 {"lag_days", sched.lag_days}};
    }
    if (report.is_null()) {
        std::cerr << "ingest needs data.jhu_csv and/or data.vaccination_csv in the config\n";
        return kExitConfig;
    }
    write_manifest(out, "ingest", cfg, report);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"seirfit: SEIR epidemic simulation, calibration and evaluation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::string config_path, out_dir, country, target;
    int substeps = 0;
    double seed_exposed = -2.0;
    long horizon = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON run configuration");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--country", country, "country name for JHU ingestion");
        cmd->add_option("--target", target,
                        "fit target: cumulative_deaths|daily_deaths|cumulative_confirmed");
        cmd->add_option("--substeps", substeps, "integrator substeps per day");
        cmd->add_option("--seed-exposed", seed_exposed, "initial exposed count");
        cmd->add_option("--horizon", horizon, "simulation horizon in days");
    };

    auto* sim = app.add_subcommand("simulate", "integrate the model and emit a trajectory");
    auto* fit = app.add_subcommand("fit", "calibrate parameters against an observed series");
    auto* eval = app.add_subcommand("evaluate", "compute evaluation metrics for a series pair");
    auto* plot = app.add_subcommand("plotdata", "reshape outputs to long-format plot data");
    auto* ingest = app.add_subcommand("ingest", "parse source data files into model-ready series");
    for (auto* c : {sim, fit, eval, plot, ingest}) {
        add_common(c);
    }

    std::string observed_path, predicted_path, input_path;
    int n_varys = 10;
    bool emit_svg = false;
    eval->add_option("--observed", observed_path, "observed series CSV")->required();
    eval->add_option("--predicted", predicted_path, "predicted series CSV")->required();
    eval->add_option("--n-varys", n_varys, "number of fitted parameters for AIC");
    plot->add_option("--input", input_path, "trajectory or fitted-curve CSV")->required();
    plot->add_flag("--svg", emit_svg, "also emit an SVG line chart");

    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    try {
        cfg = load_config(config_path);
        // flag precedence: flags > config > defaults
        if (!out_dir.empty()) {
            cfg.output_dir = out_dir;
        }
        if (!country.empty()) {
            cfg.country = country;
        }
        if (!target.empty()) {
            cfg.target = series_kind_from_string(target);
        }
        if (substeps > 0) {
            cfg.substeps_per_day = substeps;
        }
        if (seed_exposed > -2.0) {
            cfg.seed_exposed = seed_exposed;
        }
        if (horizon > 0) {
            cfg.horizon_days = horizon;
        }
        validate_config(cfg);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (sim->parsed()) {
            return cmd_simulate(cfg);
        }
        if (fit->parsed()) {
            return cmd_fit(cfg);
        }
        if (eval->parsed()) {
            return cmd_evaluate(cfg, observed_path, predicted_path, n_varys);
        }
        if (plot->parsed()) {
            return cmd_plotdata(cfg, input_path, emit_svg);
        }
        if (ingest->parsed()) {
            return cmd_ingest(cfg);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IntegrationError& e) {
        std::cerr << "simulation failed: " << e.what() << "\n";
        return kExitSimulation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
