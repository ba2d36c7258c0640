// dglm: filtering, forecasting, comparison, simulation, grid search and
// survival prediction for dynamic generalized linear models.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric or
// domain error, 1 unexpected failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dglm/diagnostics.hpp"
#include "dglm/engine.hpp"
#include "dglm/families.hpp"
#include "dglm/io.hpp"
#include "dglm/simulate.hpp"
#include "dglm/survival.hpp"
#include "dglm/types.hpp"

namespace {

using dglm::ApproxMode;
using dglm::ClampPolicy;
using dglm::ObsContext;
using dglm::config_error;
using dglm::data_error;
using dglm::numeric_error;
using dglm::unsupported_capability;
namespace diag = dglm::diag;
namespace eng = dglm::eng;
namespace fam = dglm::fam;
namespace io = dglm::io;
namespace sim = dglm::sim;
namespace ss = dglm::ss;
namespace surv = dglm::surv;

/// Every key a configuration file may carry, across all subcommands.
const std::set<std::string>& master_keys() {
    static const std::set<std::string> keys = {
        "family",      "mode",        "delta",       "approx",
        "clamp",       "seed",        "input",       "output",
        "horizon",     "window",      "n",           "V",
        "alpha",       "nu",          "lambda",      "model",
        "omega",       "omega_level", "omega_slope", "omega_trend",
        "omega_seas",  "cycle",       "F",           "G",
        "omega_matrix", "omega_spec", "m0",          "P0",
        "r0",          "s0",          "likelihood_omega",
        "grid",        "T",           "state0",      "lambda0",
        "boundaries",
    };
    return keys;
}

/// Key/value settings from a config file; flags override these.
struct Merged {
    std::map<std::string, std::string> cfg;

    static Merged load(const std::optional<std::string>& path_flag) {
        Merged merged;
        std::string path;
        if (path_flag) {
            path = *path_flag;
        } else if (const char* env = std::getenv("DGLM_CONFIG")) {
            path = env;
        }
        if (!path.empty()) {
            merged.cfg = io::read_config_file(path);
            for (const auto& [key, value] : merged.cfg) {
                (void)value;
                if (master_keys().count(key) == 0)
                    throw config_error(path + ": unknown config key '" + key +
                                       "'");
            }
        }
        return merged;
    }

    std::optional<std::string> get(const std::string& key) const {
        const auto it = cfg.find(key);
        if (it == cfg.end()) return std::nullopt;
        return it->second;
    }
};

double config_num(const std::string& key, const std::string& text) {
    try {
        return io::parse_double(text, "config key '" + key + "'");
    } catch (const std::exception& e) {
        throw config_error(e.what());
    }
}

long long config_int(const std::string& key, const std::string& text) {
    try {
        return io::parse_int(text, "config key '" + key + "'");
    } catch (const std::exception& e) {
        throw config_error(e.what());
    }
}

std::string resolve_str(const std::optional<std::string>& flag,
                        const Merged& merged, const std::string& key,
                        const std::string& fallback) {
    if (flag) return *flag;
    if (const auto value = merged.get(key)) return *value;
    return fallback;
}

std::string require_str(const std::optional<std::string>& flag,
                        const Merged& merged, const std::string& key) {
    if (flag) return *flag;
    if (const auto value = merged.get(key)) return *value;
    throw config_error("'" + key + "' is required (flag or config key)");
}

double resolve_num(const std::optional<double>& flag, const Merged& merged,
                   const std::string& key, double fallback) {
    if (flag) return *flag;
    if (const auto value = merged.get(key)) return config_num(key, *value);
    return fallback;
}

long long resolve_int(const std::optional<long long>& flag,
                      const Merged& merged, const std::string& key,
                      long long fallback) {
    if (flag) return *flag;
    if (const auto value = merged.get(key)) return config_int(key, *value);
    return fallback;
}

/// Flag storage shared by the subcommands (exactly one parses).
struct Opts {
    std::optional<std::string> config, config_a, config_b;
    std::optional<std::string> family, mode, approx, clamp, model, output;
    std::optional<std::string> grid, boundaries;
    std::optional<double> delta, delta_a, delta_b;
    std::optional<double> n, V, alpha, nu, lambda;
    std::optional<double> omega, state0, lambda0, likelihood_omega;
    std::optional<long long> seed, T, horizon, window;
    bool plot_data{false};
    std::string data_path;
};

/// Output sink: --output / output key, default stdout.
struct Sink {
    std::ofstream file;
    std::ostream* out{&std::cout};

    void open(const Opts& o, const Merged& merged) {
        const std::string path = resolve_str(o.output, merged, "output", "");
        if (path.empty() || path == "-") return;
        file.open(path);
        if (!file) throw data_error("cannot open output '" + path + "'");
        out = &file;
    }
    std::ostream& operator*() { return *out; }
};

ObsContext build_context(const Opts& o, const Merged& merged) {
    ObsContext ctx;
    ctx.n = resolve_num(o.n, merged, "n", 1.0);
    ctx.V = resolve_num(o.V, merged, "V", 1.0);
    ctx.alpha = resolve_num(o.alpha, merged, "alpha", 1.0);
    ctx.nu = resolve_num(o.nu, merged, "nu", 1.0);
    ctx.lambda = resolve_num(o.lambda, merged, "lambda", 1.0);
    return ctx;
}

ApproxMode parse_approx(const std::string& text) {
    if (text == "exact") return ApproxMode::Exact;
    if (text == "paper") return ApproxMode::PaperApprox;
    throw config_error("approx must be 'exact' or 'paper'");
}

ClampPolicy parse_clamp(const std::string& text) {
    if (text == "error") return ClampPolicy::Error;
    if (text == "log") return ClampPolicy::ClampAndLog;
    throw config_error("clamp must be 'error' or 'log'");
}

ss::StateSpaceModel build_model(const Opts& o, const Merged& merged) {
    const std::string kind = resolve_str(o.model, merged, "model", "random-walk");
    ss::StateSpaceModel model;
    if (kind == "random-walk") {
        model = ss::build_random_walk(resolve_num(o.omega, merged, "omega", 0.0));
    } else if (kind == "linear-trend") {
        model = ss::build_linear_trend(
            resolve_num({}, merged, "omega_level", 0.0),
            resolve_num({}, merged, "omega_slope", 0.0));
    } else if (kind == "trend-harmonics") {
        const auto cycle = merged.get("cycle");
        if (!cycle) throw config_error("trend-harmonics model needs 'cycle'");
        model = ss::build_trend_harmonics(
            static_cast<int>(config_int("cycle", *cycle)),
            resolve_num({}, merged, "omega_trend", 0.0),
            resolve_num({}, merged, "omega_seas", 0.0));
    } else if (kind == "explicit") {
        const auto F = merged.get("F");
        const auto G = merged.get("G");
        const auto W = merged.get("omega_matrix");
        if (!F || !G || !W)
            throw config_error("explicit model needs 'F', 'G' and 'omega_matrix'");
        try {
            model.F = io::parse_eigen_vector(*F, "F");
            model.G = io::parse_eigen_matrix(*G, "G");
            model.Omega = io::parse_eigen_matrix(*W, "omega_matrix");
        } catch (const data_error& e) {
            throw config_error(e.what());
        }
        model.m0 = Eigen::VectorXd::Zero(model.F.size());
        model.P0 = Eigen::MatrixXd::Identity(model.F.size(), model.F.size());
    } else {
        throw config_error("unknown model '" + kind +
                           "' (random-walk, linear-trend, trend-harmonics, explicit)");
    }
    try {
        if (const auto m0 = merged.get("m0"))
            model.m0 = io::parse_eigen_vector(*m0, "m0");
        if (const auto P0 = merged.get("P0"))
            model.P0 = io::parse_eigen_matrix(*P0, "P0");
    } catch (const data_error& e) {
        throw config_error(e.what());
    }
    return model;
}

eng::EngineConfig build_engine_config(
    const Opts& o, const Merged& merged,
    const std::optional<double>& delta_override = {}) {
    eng::EngineConfig config;
    config.family = &fam::family_by_name(require_str(o.family, merged, "family"));

    const std::string mode = require_str(o.mode, merged, "mode");
    if (mode == "state-space") {
        config.mode = eng::EngineMode::StateSpace;
    } else if (mode == "discount") {
        config.mode = eng::EngineMode::PowerDiscount;
    } else {
        throw config_error("mode must be 'state-space' or 'discount'");
    }

    config.delta = delta_override
                       ? *delta_override
                       : resolve_num(o.delta, merged, "delta", 1.0);
    config.approx = parse_approx(resolve_str(o.approx, merged, "approx", "exact"));
    config.clamp_policy =
        parse_clamp(resolve_str(o.clamp, merged, "clamp", "error"));

    if (config.mode == eng::EngineMode::StateSpace) {
        config.model = build_model(o, merged);
        const std::string spec =
            resolve_str({}, merged, "omega_spec", "fixed");
        if (spec == "fixed") {
            config.omega = eng::OmegaSpec::Fixed;
        } else if (spec == "discount") {
            config.omega = eng::OmegaSpec::Discount;
        } else {
            throw config_error("omega_spec must be 'fixed' or 'discount'");
        }
    } else {
        config.initial = {resolve_num({}, merged, "r0", 1.0),
                          resolve_num({}, merged, "s0", 1.0)};
    }
    config.validate();
    return config;
}

io::Series load_series(const std::string& positional, const Merged& merged) {
    std::string path = positional;
    if (path.empty()) path = resolve_str({}, merged, "input", "");
    if (path.empty())
        throw config_error("no input data (pass a file or set 'input')");
    if (path == "-") return io::read_series(std::cin, "<stdin>");
    return io::read_series_file(path);
}

std::vector<eng::Observation> to_observations(const io::Series& series,
                                              const fam::ResponseFamily& family,
                                              const ObsContext& base) {
    const std::string name(family.name());
    if (series.has_n_column && name != "binomial" && name != "negative-binomial")
        throw data_error(
            "the 'n' column applies only to the binomial and negative-binomial "
            "families");
    std::vector<eng::Observation> obs;
    obs.reserve(series.rows.size());
    for (const auto& row : series.rows) {
        eng::Observation ob;
        ob.ctx = base;
        if (series.has_n_column) ob.ctx.n = row.n;
        ob.y = row.y;
        ob.missing = row.missing;
        obs.push_back(ob);
    }
    return obs;
}

const char* stat_token(fam::ForecastStat stat) {
    switch (stat) {
        case fam::ForecastStat::Y: return "y";
        case fam::ForecastStat::YPowNu: return "y^nu";
        case fam::ForecastStat::LogY: return "log_y";
    }
    return "?";
}

void print_warnings(const std::vector<dglm::Warning>& warnings) {
    for (const auto& w : warnings)
        std::cerr << "dglm: warning t=" << w.t << ": " << w.message << "\n";
}

/// Field order is part of the tool's contract; see the README.
std::string format_step_line(const eng::StepRecord& rec,
                             const std::string& label, bool state_space) {
    std::ostringstream os;
    os << "step t=" << label << " y=" << (rec.observed ? io::fmt(rec.y) : "NA")
       << " f=" << io::fmt(rec.f) << " q=" << io::fmt(rec.q)
       << " r=" << io::fmt(rec.r) << " s=" << io::fmt(rec.s)
       << " f_star=" << io::fmt(rec.f_star)
       << " q_star=" << io::fmt(rec.q_star)
       << " r_post=" << io::fmt(rec.r_post)
       << " s_post=" << io::fmt(rec.s_post)
       << " mean=" << (rec.forecast_mean_defined ? io::fmt(rec.forecast_mean) : "NA")
       << " var="
       << (rec.forecast_variance_defined ? io::fmt(rec.forecast_variance) : "NA")
       << " stat=" << stat_token(rec.forecast_stat)
       << " logdens=" << (rec.observed ? io::fmt(rec.one_step_log_density) : "NA");
    if (state_space) {
        os << " m=" << io::fmt_vector(rec.m)
           << " Pdiag=" << io::fmt_vector(rec.P.diagonal());
    }
    return os.str();
}

struct FitRun {
    eng::EngineConfig config;
    std::vector<eng::Observation> obs;
    std::vector<io::SeriesRow> rows;
    std::vector<eng::StepRecord> records;
    eng::FilterState state;
    double likelihood_omega{1.0};
};

FitRun run_filter_from(const Opts& o, const Merged& merged) {
    FitRun run;
    run.config = build_engine_config(o, merged);
    const io::Series series = load_series(o.data_path, merged);
    run.rows = series.rows;
    run.obs = to_observations(series, *run.config.family,
                              build_context(o, merged));
    run.state = eng::init_state(run.config);
    run.records.reserve(run.obs.size());
    for (const auto& ob : run.obs) {
        run.records.push_back(eng::filter_step(run.state, run.config, ob));
        print_warnings(run.records.back().warnings);
    }
    return run;
}

void print_summary(std::ostream& out, const FitRun& run) {
    double the_mse = std::numeric_limits<double>::quiet_NaN();
    try {
        the_mse = diag::mse(run.records, run.obs);
    } catch (const std::exception& e) {
        std::cerr << "dglm: note: mse unavailable: " << e.what() << "\n";
    }
    double loglik = std::numeric_limits<double>::quiet_NaN();
    try {
        const auto path =
            diag::plugin_state_path(*run.config.family, run.records, run.obs);
        const double omega = run.likelihood_omega;
        loglik = diag::log_likelihood(*run.config.family, path, run.obs, omega);
    } catch (const std::exception& e) {
        std::cerr << "dglm: note: log-likelihood unavailable: " << e.what()
                  << "\n";
    }
    std::size_t warning_count = 0;
    for (const auto& rec : run.records) warning_count += rec.warnings.size();
    out << "summary steps=" << run.records.size() << " mse=" << io::fmt(the_mse)
        << " loglik=" << io::fmt(loglik) << " warnings=" << warning_count
        << "\n";
}

int run_fit(const Opts& o) {
    const Merged merged = Merged::load(o.config);
    Sink sink;
    sink.open(o, merged);
    FitRun run = run_filter_from(o, merged);
    run.likelihood_omega =
        resolve_num(o.likelihood_omega, merged, "likelihood_omega", 1.0);

    const bool state_space = run.config.mode == eng::EngineMode::StateSpace;
    if (o.plot_data) {
        *sink << "t,y,forecast_mean,lower,upper\n";
        for (std::size_t i = 0; i < run.records.size(); ++i) {
            const auto& rec = run.records[i];
            const dglm::ConjugateParams prior{rec.r, rec.s};
            const auto& ctx = run.obs[i].ctx;
            const double lower =
                run.config.family->forecast_quantile(prior, 0.05, ctx);
            const double upper =
                run.config.family->forecast_quantile(prior, 0.95, ctx);
            *sink << run.rows[i].label << ','
                  << (rec.observed ? io::fmt(rec.y) : "NA") << ','
                  << (rec.forecast_mean_defined ? io::fmt(rec.forecast_mean)
                                                : "NA")
                  << ',' << io::fmt(lower) << ',' << io::fmt(upper) << "\n";
        }
        return 0;
    }

    for (std::size_t i = 0; i < run.records.size(); ++i)
        *sink << format_step_line(run.records[i], run.rows[i].label,
                                  state_space)
              << "\n";
    print_summary(*sink, run);
    return 0;
}

int run_forecast(const Opts& o) {
    const Merged merged = Merged::load(o.config);
    Sink sink;
    sink.open(o, merged);
    FitRun run = run_filter_from(o, merged);
    const long long horizon = resolve_int(o.horizon, merged, "horizon", 1);
    if (horizon < 1) throw config_error("horizon must be >= 1");

    for (long long ell = 1; ell <= horizon; ++ell) {
        const auto fc =
            eng::forecast(run.state, run.config, static_cast<int>(ell));
        std::ostringstream os;
        os << "forecast ell=" << ell << " f=" << io::fmt(fc.f)
           << " q=" << io::fmt(fc.q) << " r=" << io::fmt(fc.params.r)
           << " s=" << io::fmt(fc.params.s) << " mean="
           << (fc.moments.mean_defined ? io::fmt(fc.moments.mean) : "NA")
           << " var="
           << (fc.moments.variance_defined ? io::fmt(fc.moments.variance)
                                           : "NA")
           << " stat=" << stat_token(fc.moments.stat)
           << " q05=" << io::fmt(fc.quantile(0.05))
           << " q50=" << io::fmt(fc.quantile(0.50))
           << " q95=" << io::fmt(fc.quantile(0.95));
        *sink << os.str() << "\n";
    }
    return 0;
}

int run_compare(const Opts& o) {
    const Merged merged_a = Merged::load(o.config_a ? o.config_a : o.config);
    const Merged merged_b = Merged::load(o.config_b ? o.config_b : o.config);
    Sink sink;
    sink.open(o, merged_a);

    const eng::EngineConfig config_a =
        build_engine_config(o, merged_a, o.delta_a);
    const eng::EngineConfig config_b =
        build_engine_config(o, merged_b, o.delta_b);

    const io::Series series = load_series(o.data_path, merged_a);
    const auto obs_a =
        to_observations(series, *config_a.family, build_context(o, merged_a));
    const auto obs_b =
        to_observations(series, *config_b.family, build_context(o, merged_b));

    const auto records_a = eng::run_filter(obs_a, config_a);
    const auto records_b = eng::run_filter(obs_b, config_b);
    for (const auto& rec : records_a) print_warnings(rec.warnings);
    for (const auto& rec : records_b) print_warnings(rec.warnings);

    const long long k = resolve_int(o.window, merged_a, "window", 1);
    const auto cmp =
        diag::bayes_factors(records_a, records_b, static_cast<int>(k));

    for (std::size_t i = 0; i < cmp.h1.size(); ++i)
        *sink << "H t=" << series.rows[i].label << " h1=" << io::fmt(cmp.h1[i])
              << " hk=" << io::fmt(cmp.hk[i]) << "\n";
    *sink << "summary h_bar=" << io::fmt(cmp.h_bar) << " k=" << cmp.k
          << " log_score_a=" << io::fmt(cmp.log_score_1)
          << " log_score_b=" << io::fmt(cmp.log_score_2) << "\n";
    return 0;
}

int run_simulate(const Opts& o) {
    const Merged merged = Merged::load(o.config);
    Sink sink;
    sink.open(o, merged);

    const std::string family_name = require_str(o.family, merged, "family");
    const auto& family = fam::family_by_name(family_name);
    const long long T = resolve_int(o.T, merged, "T", 0);
    if (T < 1) throw config_error("'T' is required and must be >= 1");
    const auto seed =
        static_cast<std::uint64_t>(resolve_int(o.seed, merged, "seed", 0));
    const double omega = resolve_num(o.omega, merged, "omega", 1.0);
    const ObsContext ctx = build_context(o, merged);

    sim::SimResult result;
    const std::string name(family.name());
    if (name == "negative-binomial") {
        result = sim::simulate_negative_binomial(static_cast<int>(T), ctx.n,
                                                 omega, seed);
    } else if (name == "weibull") {
        const double lambda0 = resolve_num(o.lambda0, merged, "lambda0", 1.0);
        result = sim::simulate_weibull(static_cast<int>(T), ctx.nu, lambda0,
                                       omega, seed);
    } else {
        sim::SimSpec spec;
        spec.family = &family;
        spec.T = static_cast<int>(T);
        spec.state0 = resolve_num(o.state0, merged, "state0", 1.0);
        spec.Omega = omega;
        spec.ctx = ctx;
        spec.seed = seed;
        result = sim::simulate_generic(spec);
    }

    const bool with_n = name == "binomial" || name == "negative-binomial";
    *sink << (with_n ? "t,y,n" : "t,y") << "\n";
    for (std::size_t i = 0; i < result.y.size(); ++i) {
        *sink << (i + 1) << ',' << io::fmt(result.y[i]);
        if (with_n) *sink << ',' << io::fmt(ctx.n);
        *sink << "\n";
    }
    return 0;
}

int run_gridsearch(const Opts& o) {
    const Merged merged = Merged::load(o.config);
    Sink sink;
    sink.open(o, merged);

    const eng::EngineConfig config = build_engine_config(o, merged);
    const io::Series series = load_series(o.data_path, merged);
    const auto obs =
        to_observations(series, *config.family, build_context(o, merged));

    const std::string grid_text = require_str(o.grid, merged, "grid");
    std::vector<double> grid;
    try {
        grid = io::parse_grid(grid_text, "grid");
    } catch (const data_error& e) {
        throw config_error(e.what());
    }
    const double omega =
        resolve_num(o.likelihood_omega, merged, "likelihood_omega", 1.0);

    const auto result = diag::grid_search_delta(config, obs, grid, omega);
    for (const auto& cell : result.cells) {
        if (cell.ok) {
            *sink << "cell delta=" << io::fmt(cell.delta)
                  << " mse=" << io::fmt(cell.mse)
                  << " loglik=" << io::fmt(cell.log_likelihood) << "\n";
        } else {
            *sink << "cell delta=" << io::fmt(cell.delta) << " error=\""
                  << cell.error << "\"\n";
        }
    }
    if (!result.any_ok)
        throw numeric_error("grid search: every cell failed");
    *sink << "summary best_mse_delta=" << io::fmt(result.best_mse_delta)
          << " best_loglik_delta=" << io::fmt(result.best_loglik_delta)
          << "\n";
    return 0;
}

int run_survival(const Opts& o) {
    const Merged merged = Merged::load(o.config);
    Sink sink;
    sink.open(o, merged);

    std::string path = o.data_path;
    if (path.empty()) path = resolve_str({}, merged, "input", "");
    if (path.empty())
        throw config_error("no input data (pass a file or set 'input')");
    const io::Table table = path == "-" ? io::read_table(std::cin, "<stdin>")
                                        : io::read_table_file(path);

    const double nu = resolve_num(o.nu, merged, "nu", 1.0);

    if (table.columns == std::vector<std::string>{"r", "s", "gap"}) {
        for (const auto& row : table.rows) {
            const double value = surv::survivor_prediction(row[0], row[1],
                                                           row[2], nu);
            *sink << "survivor r=" << io::fmt(row[0]) << " s=" << io::fmt(row[1])
                  << " gap=" << io::fmt(row[2]) << " nu=" << io::fmt(nu)
                  << " S=" << io::fmt(value) << "\n";
        }
        return 0;
    }

    if (table.columns.size() < 2 || table.columns[0] != "time" ||
        table.columns[1] != "event")
        throw data_error(
            "survival input must have header 'r,s,gap' or 'time,event[,x...]'");

    std::vector<surv::Individual> individuals;
    individuals.reserve(table.rows.size());
    const std::size_t p = table.columns.size() - 2;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        surv::Individual ind;
        ind.time = row[0];
        if (row[1] != 0.0 && row[1] != 1.0)
            throw data_error("survival: row " + std::to_string(i + 1) +
                             ": event must be 0 or 1");
        ind.censored = row[1] == 0.0;
        ind.x = Eigen::VectorXd(static_cast<Eigen::Index>(p));
        for (std::size_t j = 0; j < p; ++j)
            ind.x(static_cast<Eigen::Index>(j)) = row[2 + j];
        individuals.push_back(std::move(ind));
    }

    surv::SurvivalModel model;
    model.nu = nu;
    const auto boundaries = o.boundaries
                                ? o.boundaries
                                : merged.get("boundaries");
    if (!boundaries)
        throw config_error("survival fit needs 'boundaries' (e.g. 0,1,2,3)");
    try {
        model.boundaries = io::parse_number_list(*boundaries, "boundaries");
    } catch (const data_error& e) {
        throw config_error(e.what());
    }

    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(p);
    model.m0 = Eigen::VectorXd::Zero(dim);
    model.P0 = 1000.0 * Eigen::MatrixXd::Identity(dim, dim);
    try {
        if (const auto m0 = merged.get("m0"))
            model.m0 = io::parse_eigen_vector(*m0, "m0");
        if (const auto P0 = merged.get("P0"))
            model.P0 = io::parse_eigen_matrix(*P0, "P0");
    } catch (const data_error& e) {
        throw config_error(e.what());
    }
    if (const auto W = merged.get("omega_matrix")) {
        model.omega_spec = eng::OmegaSpec::Fixed;
        try {
            model.Omega = io::parse_eigen_matrix(*W, "omega_matrix");
        } catch (const data_error& e) {
            throw config_error(e.what());
        }
    } else {
        model.omega_spec = eng::OmegaSpec::Discount;
        model.delta = resolve_num(o.delta, merged, "delta", 0.0);
        if (!(model.delta > 0.0))
            throw config_error("survival fit needs 'omega_matrix' or 'delta'");
    }
    model.approx = parse_approx(resolve_str(o.approx, merged, "approx", "exact"));

    const auto fit = surv::fit_survival(model, individuals);
    print_warnings(fit.warnings);
    for (std::size_t t = 0; t < fit.interval_states.size(); ++t)
        *sink << "state interval=" << (t + 1)
              << " m=" << io::fmt_vector(fit.interval_states[t].m)
              << " Pdiag=" << io::fmt_vector(fit.interval_states[t].P.diagonal())
              << "\n";
    for (const auto& point : fit.curves)
        *sink << "curve individual=" << point.individual
              << " interval=" << point.interval << " r=" << io::fmt(point.r)
              << " s=" << io::fmt(point.s)
              << " S_end=" << io::fmt(point.survivor_at_end)
              << " updated=" << (point.updated ? 1 : 0) << "\n";
    return 0;
}

void add_context_flags(CLI::App* cmd, Opts& o) {
    cmd->add_option("--n", o.n, "Trial/failure count context (binomial, negative-binomial)");
    cmd->add_option("--V", o.V, "Observation variance (normal, log-normal)");
    cmd->add_option("--alpha", o.alpha, "Gamma shape");
    cmd->add_option("--nu", o.nu, "Weibull shape");
    cmd->add_option("--lambda", o.lambda, "Inverse-Gaussian precision");
}

void add_engine_flags(CLI::App* cmd, Opts& o) {
    cmd->add_option("--config", o.config,
                    "Config file (default: $DGLM_CONFIG)");
    cmd->add_option("--family", o.family, "Response family");
    cmd->add_option("--mode", o.mode, "state-space | discount");
    cmd->add_option("--delta", o.delta, "Discount factor in (0,1]");
    cmd->add_option("--approx", o.approx,
                    "Posterior-moment formulas: exact | paper");
    cmd->add_option("--clamp", o.clamp,
                    "Out-of-domain predictor handling: error | log");
    cmd->add_option("--model", o.model,
                    "State model: random-walk | linear-trend | trend-harmonics | explicit");
    cmd->add_option("--omega", o.omega, "Random-walk innovation variance");
    cmd->add_option("--output", o.output, "Write results to a file");
    add_context_flags(cmd, o);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Dynamic generalized linear models: conjugate filtering, forecasting, "
        "model comparison, simulation, discount grid search and survival "
        "prediction."};
    app.require_subcommand(1);
    Opts o;

    auto* fit = app.add_subcommand("fit", "Filter a series, one record per step");
    add_engine_flags(fit, o);
    fit->add_option("--likelihood-omega", o.likelihood_omega,
                    "Transition variance for the summary plug-in log-likelihood");
    fit->add_flag("--plot-data", o.plot_data,
                  "Emit t,y,forecast_mean,lower,upper DSV instead of records");
    fit->add_option("data", o.data_path, "Input series ('-' for stdin)");

    auto* forecast =
        app.add_subcommand("forecast", "Fit, then forecast ell = 1..horizon");
    add_engine_flags(forecast, o);
    forecast->add_option("--horizon", o.horizon, "Forecast horizon (>= 1)");
    forecast->add_option("data", o.data_path, "Input series ('-' for stdin)");

    auto* compare = app.add_subcommand(
        "compare", "Sequential Bayes factors of model A against model B");
    add_engine_flags(compare, o);
    compare->add_option("--config-a", o.config_a, "Model A config file");
    compare->add_option("--config-b", o.config_b, "Model B config file");
    compare->add_option("--delta-a", o.delta_a, "Model A discount factor");
    compare->add_option("--delta-b", o.delta_b, "Model B discount factor");
    compare->add_option("--window", o.window, "Bayes-factor window k");
    compare->add_option("data", o.data_path, "Input series ('-' for stdin)");

    auto* simulate =
        app.add_subcommand("simulate", "Draw a synthetic series as DSV");
    simulate->add_option("--config", o.config,
                         "Config file (default: $DGLM_CONFIG)");
    simulate->add_option("--family", o.family, "Response family");
    simulate->add_option("--T", o.T, "Series length");
    simulate->add_option("--seed", o.seed, "RNG seed (Philox4x32-10 stream)");
    simulate->add_option("--omega", o.omega, "State innovation variance");
    simulate->add_option("--state0", o.state0, "Initial state (generic driver)");
    simulate->add_option("--lambda0", o.lambda0, "Initial Weibull scale");
    simulate->add_option("--output", o.output, "Write the series to a file");
    add_context_flags(simulate, o);

    auto* gridsearch = app.add_subcommand(
        "gridsearch", "Fit across a delta grid; report MSE and log-likelihood");
    add_engine_flags(gridsearch, o);
    gridsearch->add_option("--grid", o.grid,
                           "Delta grid: comma list or a:b[:step]");
    gridsearch->add_option("--likelihood-omega", o.likelihood_omega,
                           "Transition variance for the plug-in log-likelihood");
    gridsearch->add_option("data", o.data_path, "Input series ('-' for stdin)");

    auto* survival = app.add_subcommand(
        "survival",
        "Survivor predictions (header r,s,gap) or a dynamic survival fit "
        "(header time,event[,x...])");
    survival->add_option("--config", o.config,
                         "Config file (default: $DGLM_CONFIG)");
    survival->add_option("--nu", o.nu, "Weibull shape (1 = exponential)");
    survival->add_option("--delta", o.delta, "Discount factor for the state");
    survival->add_option("--boundaries", o.boundaries,
                         "Interval partition, e.g. 0,1,2,3");
    survival->add_option("--approx", o.approx,
                         "Posterior-moment formulas: exact | paper");
    survival->add_option("--output", o.output, "Write results to a file");
    survival->add_option("data", o.data_path, "Input table ('-' for stdin)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (fit->parsed()) return run_fit(o);
        if (forecast->parsed()) return run_forecast(o);
        if (compare->parsed()) return run_compare(o);
        if (simulate->parsed()) return run_simulate(o);
        if (gridsearch->parsed()) return run_gridsearch(o);
        if (survival->parsed()) return run_survival(o);
    } catch (const unsupported_capability& e) {
        std::cerr << "dglm: error: " << e.what() << "\n";
        return 2;
    } catch (const config_error& e) {
        std::cerr << "dglm: error: " << e.what() << "\n";
        return 2;
    } catch (const data_error& e) {
        std::cerr << "dglm: error: " << e.what() << "\n";
        return 3;
    } catch (const numeric_error& e) {
        std::cerr << "dglm: error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "dglm: unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
