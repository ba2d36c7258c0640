#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dglm/engine.hpp"

namespace dglm::diag {

/// Plug-in log-likelihood: sum of observation log-densities along
/// `state_path` plus the family's state-transition log-densities with
/// innovation variance Omega. The transition sum starts at t=2 unless
/// `initial_state` supplies a gamma_0 for the t=1 term. Domain violations
/// rethrow naming the offending step.
double log_likelihood(const fam::ResponseFamily& family,
                      const std::vector<double>& state_path,
                      const std::vector<eng::Observation>& data, double Omega,
                      std::optional<double> initial_state = {});

/// Squared-return volatility log-likelihood in the published closed shape
///   -(T/2) log(2 Omega pi^2) - sum_t log y_t^2
///   - (1/(2 Omega)) sum_{t>=2} (log beta_t - log beta_{t-1})^2
/// evaluated along a path of gamma-family states beta_t (y holds returns,
/// not squared returns).
double volatility_log_likelihood(const std::vector<double>& y,
                                 const std::vector<double>& beta_path,
                                 double Omega);

/// Sum of per-step one-step predictive log-densities over observed steps.
double log_predictive_score(const std::vector<eng::StepRecord>& records);

/// Sequential Bayes factors of model 1 against model 2.
/// h1[t] = p_1(y_t|y^{t-1}) / p_2(y_t|y^{t-1}) for t >= 2 and h1[0] = 1 by
/// the published convention; hk[t] is the windowed product over the last k
/// steps (shorter near the start); h_bar is the arithmetic mean of h1.
/// All products are accumulated in log space.
struct ModelComparison {
    std::vector<double> log_h1;
    std::vector<double> h1;
    std::vector<double> hk;
    int k{1};
    double h_bar{1.0};
    double log_score_1{0.0};
    double log_score_2{0.0};
};

ModelComparison bayes_factors(const std::vector<eng::StepRecord>& model1,
                              const std::vector<eng::StepRecord>& model2,
                              int k);

/// Mean squared one-step forecast error over observed steps with a defined
/// forecast mean, measured on the family's forecast statistic (y itself for
/// most families, y^nu for Weibull, log y for Pareto).
double mse(const std::vector<eng::StepRecord>& records,
           const std::vector<eng::Observation>& data);

/// One grid cell: a full filter run at this delta. Failed cells record the
/// error and the search continues.
struct GridCell {
    double delta{0.0};
    double mse{0.0};
    double log_likelihood{0.0};
    bool ok{false};
    std::string error;
};

struct GridSearchResult {
    std::vector<GridCell> cells;
    double best_mse_delta{0.0};
    double best_loglik_delta{0.0};
    bool any_ok{false};
};

/// One run per delta over `grid` (applied to the discount factor in
/// PowerDiscount mode and to the discount-innovation delta in StateSpace
/// mode). The plug-in log-likelihood is evaluated along the posterior-mean
/// state path with transition variance `transition_omega`. Cells run
/// concurrently; the result order follows the grid.
GridSearchResult grid_search_delta(const eng::EngineConfig& config_template,
                                   const std::vector<eng::Observation>& data,
                                   const std::vector<double>& grid,
                                   double transition_omega);

/// Posterior-mean (plug-in) state path from filter records: plugin_state of
/// each step's posterior (r*, s*). Missing steps carry the previous state.
std::vector<double> plugin_state_path(
    const fam::ResponseFamily& family,
    const std::vector<eng::StepRecord>& records,
    const std::vector<eng::Observation>& data);

}  // namespace dglm::diag
