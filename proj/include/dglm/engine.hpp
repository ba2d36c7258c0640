#pragma once

#include <optional>
#include <vector>

#include "dglm/families.hpp"
#include "dglm/state_space.hpp"
#include "dglm/types.hpp"

namespace dglm::eng {

enum class EngineMode { StateSpace, PowerDiscount };

/// How the state-space mode obtains the innovation covariance: the model's
/// fixed Omega, or the discount construction Omega_t = (1 - delta)/delta *
/// P_{t-1} recomputed from the running posterior covariance.
enum class OmegaSpec { Fixed, Discount };

struct EngineConfig {
    EngineMode mode{EngineMode::StateSpace};
    const fam::ResponseFamily* family{nullptr};
    ss::StateSpaceModel model;            ///< StateSpace mode
    OmegaSpec omega{OmegaSpec::Fixed};    ///< StateSpace mode
    double delta{1.0};                    ///< PowerDiscount mode and OmegaSpec::Discount
    ApproxMode approx{ApproxMode::Exact};
    ConjugateParams initial{1.0, 1.0};    ///< PowerDiscount mode r0, s0
    ClampPolicy clamp_policy{ClampPolicy::Error};

    /// Throws config_error when mode-required fields are missing or delta
    /// lies outside (0,1].
    void validate() const;
};

/// One observation row: y plus its per-step context; missing = true steps
/// propagate the state without a posterior update.
struct Observation {
    double y{0.0};
    ObsContext ctx{};
    bool missing{false};
};

/// Per-step audit trail across the prior -> predictive -> posterior cycle.
/// Quantities that do not exist for a step (posterior moments on a missing
/// observation, state moments in discount mode) are NaN / empty.
struct StepRecord {
    long long t{0};
    bool observed{true};
    double y{0.0};
    double f{0.0};
    double q{0.0};
    double r{0.0};
    double s{0.0};
    double f_star{0.0};
    double q_star{0.0};
    double r_post{0.0};
    double s_post{0.0};
    Eigen::VectorXd m;
    Eigen::MatrixXd P;
    double one_step_log_density{0.0};
    double forecast_mean{0.0};
    double forecast_variance{0.0};
    bool forecast_mean_defined{false};
    bool forecast_variance_defined{false};
    fam::ForecastStat forecast_stat{fam::ForecastStat::Y};
    std::vector<Warning> warnings;
};

/// Mutable filter state threaded through filter_step. In StateSpace mode
/// `moments` is the running posterior (m, P); in PowerDiscount mode
/// `params` is the last posterior (r*, s*), discounted into the next prior
/// when the next step's context is known.
struct FilterState {
    long long t{0};
    ss::StateMoments moments;
    ConjugateParams params{1.0, 1.0};
    ObsContext last_ctx{};
    bool has_posterior{false};
};

FilterState init_state(const EngineConfig& config);

/// One prior -> predictive -> posterior cycle; advances `state` and returns
/// the step's record.
StepRecord filter_step(FilterState& state, const EngineConfig& config,
                       const Observation& obs);

/// Fold of filter_step over the series. Deterministic given (config, series).
std::vector<StepRecord> run_filter(const std::vector<Observation>& series,
                                   const EngineConfig& config);

/// ell-step-ahead forecast from the current state. Carries family, context
/// and conjugate parameters so the predictive density remains evaluable.
struct ForecastRecord {
    int ell{1};
    ConjugateParams params{};
    double f{0.0};
    double q{0.0};
    fam::ForecastMoments moments{};
    const fam::ResponseFamily* family{nullptr};
    ObsContext ctx{};

    double logdensity(double y) const {
        return family->forecast_logdensity(params, y, ctx);
    }
    double cdf(double y) const { return family->forecast_cdf(params, y, ctx); }
    double quantile(double p) const {
        return family->forecast_quantile(params, p, ctx);
    }
};

/// Forecast ell steps ahead. StateSpace mode: k-step predictor moments then
/// conjugate matching. PowerDiscount mode: the next-step prior, constant in
/// ell (the published random-walk-type convention). ctx_future defaults to
/// the last observed context.
ForecastRecord forecast(const FilterState& state, const EngineConfig& config,
                        int ell,
                        const std::optional<ObsContext>& ctx_future = {});

}  // namespace dglm::eng
