#include "dglm/engine.hpp"

#include <cmath>
#include <limits>

namespace dglm::eng {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void fill_forecast_fields(StepRecord& rec, const fam::ForecastMoments& fm) {
    rec.forecast_mean = fm.mean_defined ? fm.mean : kNan;
    rec.forecast_variance = fm.variance_defined ? fm.variance : kNan;
    rec.forecast_mean_defined = fm.mean_defined;
    rec.forecast_variance_defined = fm.variance_defined;
    rec.forecast_stat = fm.stat;
}

/// PowerDiscount prior for the coming step: the initial (r0, s0) before any
/// data, otherwise the stored posterior discounted once into the new
/// context.
ConjugateParams discount_prior(const FilterState& state,
                               const EngineConfig& config,
                               const ObsContext& ctx_now) {
    if (!state.has_posterior) return config.initial;
    return config.family->power_discount(state.params, config.delta,
                                         state.last_ctx, ctx_now,
                                         config.approx);
}

StepRecord step_state_space(FilterState& state, const EngineConfig& config,
                            const Observation& obs) {
    StepRecord rec;
    rec.t = state.t + 1;
    rec.observed = !obs.missing;
    rec.y = obs.missing ? kNan : obs.y;

    const auto& model = config.model;
    const Eigen::MatrixXd Omega =
        config.omega == OmegaSpec::Discount
            ? ss::discount_innovation(state.moments.P, config.delta)
            : model.Omega;
    auto [h, R] = ss::propagate(state.moments, model.G, Omega, &rec.warnings,
                                rec.t);

    const PredictorMoments prior_fq = ss::predictor_moments(h, R, model.F);
    rec.f = prior_fq.f;
    rec.q = prior_fq.q;

    const ConjugateParams prior = config.family->conjugate_from_moments(
        prior_fq, obs.ctx, config.clamp_policy, &rec.warnings, rec.t);
    rec.r = prior.r;
    rec.s = prior.s;
    fill_forecast_fields(rec, config.family->forecast_moments(prior, obs.ctx));

    if (obs.missing) {
        rec.f_star = kNan;
        rec.q_star = kNan;
        rec.r_post = kNan;
        rec.s_post = kNan;
        rec.one_step_log_density = kNan;
        state.moments = {std::move(h), std::move(R)};
    } else {
        rec.one_step_log_density =
            config.family->forecast_logdensity(prior, obs.y, obs.ctx);
        const ConjugateParams post =
            config.family->posterior_params(prior, obs.y, obs.ctx);
        rec.r_post = post.r;
        rec.s_post = post.s;
        const PredictorMoments post_fq =
            config.family->posterior_predictor_moments(post, obs.ctx,
                                                       config.approx);
        rec.f_star = post_fq.f;
        rec.q_star = post_fq.q;
        state.moments = ss::bayes_linear_update(h, R, model.F, prior_fq,
                                                post_fq, &rec.warnings, rec.t);
    }
    rec.m = state.moments.m;
    rec.P = state.moments.P;
    state.last_ctx = obs.ctx;
    state.t = rec.t;
    return rec;
}

StepRecord step_power_discount(FilterState& state, const EngineConfig& config,
                               const Observation& obs) {
    StepRecord rec;
    rec.t = state.t + 1;
    rec.observed = !obs.missing;
    rec.y = obs.missing ? kNan : obs.y;

    const ConjugateParams prior = discount_prior(state, config, obs.ctx);
    rec.r = prior.r;
    rec.s = prior.s;
    const bool closed = config.family->has_closed_moment_matching();
    if (closed) {
        const PredictorMoments fq =
            config.family->matching_moments(prior, obs.ctx);
        rec.f = fq.f;
        rec.q = fq.q;
    } else {
        rec.f = kNan;
        rec.q = kNan;
    }
    fill_forecast_fields(rec, config.family->forecast_moments(prior, obs.ctx));

    if (obs.missing) {
        rec.f_star = kNan;
        rec.q_star = kNan;
        rec.r_post = kNan;
        rec.s_post = kNan;
        rec.one_step_log_density = kNan;
        // Holding the prior as the stored "posterior" yields exactly one
        // discount application across the missing step.
        state.params = prior;
    } else {
        rec.one_step_log_density =
            config.family->forecast_logdensity(prior, obs.y, obs.ctx);
        const ConjugateParams post =
            config.family->posterior_params(prior, obs.y, obs.ctx);
        rec.r_post = post.r;
        rec.s_post = post.s;
        if (closed) {
            const PredictorMoments post_fq =
                config.family->posterior_predictor_moments(post, obs.ctx,
                                                           config.approx);
            rec.f_star = post_fq.f;
            rec.q_star = post_fq.q;
        } else {
            rec.f_star = kNan;
            rec.q_star = kNan;
        }
        state.params = post;
    }
    state.has_posterior = true;
    state.last_ctx = obs.ctx;
    state.t = rec.t;
    return rec;
}

}  // namespace

void EngineConfig::validate() const {
    if (family == nullptr) {
        throw config_error("engine: config requires a response family");
    }
    if (mode == EngineMode::StateSpace) {
        ss::validate(model);
        if (!family->has_closed_moment_matching()) {
            throw unsupported_capability(
                std::string(family->name()) +
                ": no closed moment matching; state-space mode is "
                "unavailable, use discount mode");
        }
        if (omega == OmegaSpec::Discount &&
            !(delta > 0.0 && delta <= 1.0)) {
            throw config_error(
                "engine: discount-omega delta must lie in (0,1]");
        }
    } else {
        if (!(delta > 0.0 && delta <= 1.0)) {
            throw config_error("engine: delta must lie in (0,1]");
        }
    }
}

FilterState init_state(const EngineConfig& config) {
    config.validate();
    FilterState state;
    if (config.mode == EngineMode::StateSpace) {
        state.moments = {config.model.m0, config.model.P0};
    } else {
        state.params = config.initial;
    }
    return state;
}

StepRecord filter_step(FilterState& state, const EngineConfig& config,
                       const Observation& obs) {
    config.family->validate_context(obs.ctx);
    if (config.mode == EngineMode::StateSpace) {
        return step_state_space(state, config, obs);
    }
    return step_power_discount(state, config, obs);
}

std::vector<StepRecord> run_filter(const std::vector<Observation>& series,
                                   const EngineConfig& config) {
    if (series.empty()) {
        throw data_error("engine: empty observation series");
    }
    FilterState state = init_state(config);
    std::vector<StepRecord> records;
    records.reserve(series.size());
    for (const auto& obs : series) {
        records.push_back(filter_step(state, config, obs));
    }
    return records;
}

ForecastRecord forecast(const FilterState& state, const EngineConfig& config,
                        int ell,
                        const std::optional<ObsContext>& ctx_future) {
    config.validate();
    if (ell < 1) throw config_error("engine: forecast horizon must be >= 1");
    const ObsContext ctx = ctx_future.value_or(state.last_ctx);
    config.family->validate_context(ctx);

    ForecastRecord rec;
    rec.ell = ell;
    rec.family = config.family;
    rec.ctx = ctx;

    if (config.mode == EngineMode::StateSpace) {
        PredictorMoments fq;
        if (config.omega == OmegaSpec::Fixed) {
            fq = ss::k_step_predictor(state.moments, config.model, ell);
        } else {
            // Discount innovation compounds through the unobserved steps:
            // R_j = G R_{j-1} G' + (1-delta)/delta R_{j-1} with R_0 = P.
            ss::StateMoments cur = state.moments;
            for (int j = 0; j < ell; ++j) {
                const Eigen::MatrixXd Omega =
                    ss::discount_innovation(cur.P, config.delta);
                auto [h, R] = ss::propagate(cur, config.model.G, Omega);
                cur = {std::move(h), std::move(R)};
            }
            fq = ss::predictor_moments(cur.m, cur.P, config.model.F);
        }
        rec.f = fq.f;
        rec.q = fq.q;
        rec.params = config.family->conjugate_from_moments(
            fq, ctx, config.clamp_policy, nullptr, state.t);
    } else {
        // Horizon-constant convention: r_t(ell) = r_{t+1}, s_t(ell) =
        // s_{t+1} for every ell.
        rec.params = discount_prior(state, config, ctx);
        if (config.family->has_closed_moment_matching()) {
            const PredictorMoments fq =
                config.family->matching_moments(rec.params, ctx);
            rec.f = fq.f;
            rec.q = fq.q;
        } else {
            rec.f = kNan;
            rec.q = kNan;
        }
    }
    rec.moments = config.family->forecast_moments(rec.params, ctx);
    return rec;
}

}  // namespace dglm::eng
