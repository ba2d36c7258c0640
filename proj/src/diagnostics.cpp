#include "dglm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dglm/types.hpp"

namespace dglm::diag {

namespace {

[[noreturn]] void rethrow_at(const char* where, int t, const std::exception& e) {
    const std::string msg =
        std::string(where) + ": t=" + std::to_string(t) + ": " + e.what();
    if (dynamic_cast<const data_error*>(&e) != nullptr) throw data_error(msg);
    if (dynamic_cast<const config_error*>(&e) != nullptr) throw config_error(msg);
    throw numeric_error(msg);
}

double stat_value(fam::ForecastStat stat, double y, const ObsContext& ctx) {
    switch (stat) {
        case fam::ForecastStat::Y:
            return y;
        case fam::ForecastStat::YPowNu:
            return std::pow(y, ctx.nu);
        case fam::ForecastStat::LogY:
            return std::log(y);
    }
    throw numeric_error("mse: unknown forecast statistic");
}

}  // namespace

double log_likelihood(const fam::ResponseFamily& family,
                      const std::vector<double>& state_path,
                      const std::vector<eng::Observation>& data, double Omega,
                      std::optional<double> initial_state) {
    if (state_path.size() != data.size())
        throw data_error("log likelihood: state path and data length differ");
    if (data.empty()) throw data_error("log likelihood: empty series");
    if (!(Omega > 0.0) || !std::isfinite(Omega))
        throw config_error("log likelihood: Omega must be positive");

    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const int t = static_cast<int>(i) + 1;
        if (!data[i].missing) {
            try {
                total += family.obs_logdensity(data[i].y, state_path[i],
                                               data[i].ctx);
            } catch (const std::exception& e) {
                rethrow_at("log likelihood (observation)", t, e);
            }
        }
        if (i == 0) {
            if (initial_state) {
                try {
                    total += family.transition_logdensity(
                        state_path[0], *initial_state, Omega, data[0].ctx,
                        data[0].ctx);
                } catch (const std::exception& e) {
                    rethrow_at("log likelihood (transition)", t, e);
                }
            }
            continue;
        }
        try {
            total += family.transition_logdensity(state_path[i],
                                                  state_path[i - 1], Omega,
                                                  data[i].ctx, data[i - 1].ctx);
        } catch (const std::exception& e) {
            rethrow_at("log likelihood (transition)", t, e);
        }
    }
    return total;
}

double volatility_log_likelihood(const std::vector<double>& y,
                                 const std::vector<double>& beta_path,
                                 double Omega) {
    if (y.size() != beta_path.size())
        throw data_error("volatility log likelihood: path and data length differ");
    if (y.empty()) throw data_error("volatility log likelihood: empty series");
    if (!(Omega > 0.0) || !std::isfinite(Omega))
        throw config_error("volatility log likelihood: Omega must be positive");

    const double T = static_cast<double>(y.size());
    double total = -0.5 * T *
                   std::log(2.0 * Omega * std::numbers::pi * std::numbers::pi);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const int t = static_cast<int>(i) + 1;
        if (y[i] == 0.0 || !std::isfinite(y[i]))
            throw numeric_error(
                "volatility log likelihood: t=" + std::to_string(t) +
                ": return must be nonzero and finite");
        if (!(beta_path[i] > 0.0) || !std::isfinite(beta_path[i]))
            throw numeric_error(
                "volatility log likelihood: t=" + std::to_string(t) +
                ": state must be positive");
        total -= std::log(y[i] * y[i]);
        if (i > 0) {
            const double step = std::log(beta_path[i]) - std::log(beta_path[i - 1]);
            total -= step * step / (2.0 * Omega);
        }
    }
    return total;
}

double log_predictive_score(const std::vector<eng::StepRecord>& records) {
    double total = 0.0;
    for (const auto& rec : records)
        if (rec.observed) total += rec.one_step_log_density;
    return total;
}

ModelComparison bayes_factors(const std::vector<eng::StepRecord>& model1,
                              const std::vector<eng::StepRecord>& model2,
                              int k) {
    if (model1.size() != model2.size())
        throw data_error("bayes factors: record series lengths differ");
    if (model1.empty()) throw data_error("bayes factors: empty record series");
    if (k < 1) throw config_error("bayes factors: window k must be >= 1");

    const std::size_t T = model1.size();
    ModelComparison cmp;
    cmp.k = k;
    cmp.log_h1.resize(T);
    cmp.h1.resize(T);
    cmp.hk.resize(T);

    for (std::size_t i = 0; i < T; ++i) {
        if (model1[i].observed != model2[i].observed)
            throw data_error("bayes factors: t=" + std::to_string(i + 1) +
                             ": models disagree on which steps are observed");
        if (i == 0 || !model1[i].observed) {
            // The first step and missing steps carry no evidence; the ratio
            // is 1 by convention.
            cmp.log_h1[i] = 0.0;
        } else {
            cmp.log_h1[i] =
                model1[i].one_step_log_density - model2[i].one_step_log_density;
        }
        cmp.h1[i] = std::exp(cmp.log_h1[i]);
        double log_hk = 0.0;
        const std::size_t start = (i + 1 >= static_cast<std::size_t>(k))
                                      ? i + 1 - static_cast<std::size_t>(k)
                                      : 0;
        for (std::size_t j = start; j <= i; ++j) log_hk += cmp.log_h1[j];
        cmp.hk[i] = std::exp(log_hk);
    }

    double sum_h1 = 0.0;
    for (double h : cmp.h1) sum_h1 += h;
    cmp.h_bar = sum_h1 / static_cast<double>(T);
    cmp.log_score_1 = log_predictive_score(model1);
    cmp.log_score_2 = log_predictive_score(model2);
    return cmp;
}

double mse(const std::vector<eng::StepRecord>& records,
           const std::vector<eng::Observation>& data) {
    if (records.size() != data.size())
        throw data_error("mse: record and data lengths differ");
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!records[i].observed || !records[i].forecast_mean_defined) continue;
        const double target =
            stat_value(records[i].forecast_stat, data[i].y, data[i].ctx);
        const double err = target - records[i].forecast_mean;
        total += err * err;
        ++count;
    }
    if (count == 0) throw data_error("mse: no observed steps with a defined forecast mean");
    return total / static_cast<double>(count);
}

std::vector<double> plugin_state_path(
    const fam::ResponseFamily& family,
    const std::vector<eng::StepRecord>& records,
    const std::vector<eng::Observation>& data) {
    if (records.size() != data.size())
        throw data_error("plugin state path: record and data lengths differ");
    std::vector<double> path(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        // Observed steps use the posterior; missing steps fall back to the
        // one-step prior, which both engine modes record.
        const ConjugateParams params =
            records[i].observed ? ConjugateParams{records[i].r_post, records[i].s_post}
                                : ConjugateParams{records[i].r, records[i].s};
        path[i] = family.plugin_state(params, data[i].ctx);
    }
    return path;
}

GridSearchResult grid_search_delta(const eng::EngineConfig& config_template,
                                   const std::vector<eng::Observation>& data,
                                   const std::vector<double>& grid,
                                   double transition_omega) {
    if (grid.empty()) throw config_error("grid search: empty delta grid");
    if (config_template.family == nullptr)
        throw config_error("grid search: config has no family");

    GridSearchResult result;
    result.cells.resize(grid.size());

    const int n_cells = static_cast<int>(grid.size());
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < n_cells; ++c) {
        GridCell cell;
        cell.delta = grid[static_cast<std::size_t>(c)];
        try {
            eng::EngineConfig config = config_template;
            config.delta = cell.delta;
            const auto records = eng::run_filter(data, config);
            cell.mse = mse(records, data);
            const auto path =
                plugin_state_path(*config.family, records, data);
            cell.log_likelihood = log_likelihood(*config.family, path, data,
                                                 transition_omega);
            cell.ok = true;
        } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
        }
        result.cells[static_cast<std::size_t>(c)] = std::move(cell);
    }

    double best_mse = 0.0;
    double best_ll = 0.0;
    for (const auto& cell : result.cells) {
        if (!cell.ok) continue;
        if (!result.any_ok || cell.mse < best_mse) {
            best_mse = cell.mse;
            result.best_mse_delta = cell.delta;
        }
        if (!result.any_ok || cell.log_likelihood > best_ll) {
            best_ll = cell.log_likelihood;
            result.best_loglik_delta = cell.delta;
        }
        result.any_ok = true;
    }
    return result;
}

}  // namespace dglm::diag
