#include "dglm/survival.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dglm/families.hpp"

namespace dglm::surv {

double survivor_prediction(double r, double s, double gap, double nu) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw numeric_error("survivor prediction: r must be positive");
    if (!(s > 1.0) || !std::isfinite(s))
        throw numeric_error(
            "survivor prediction: s must exceed 1 for a proper prediction");
    if (!(nu > 0.0) || !std::isfinite(nu))
        throw config_error("survivor prediction: nu must be positive");
    if (!(gap >= 0.0))
        throw data_error("survivor prediction: gap must be nonnegative");
    if (gap == 0.0) return 1.0;
    // log S = -(s-1) log1p(gap^nu / r), stable for tiny and huge gaps.
    return std::exp(-(s - 1.0) * std::log1p(std::pow(gap, nu) / r));
}

namespace {

void validate_model(const SurvivalModel& model,
                    const std::vector<Individual>& individuals) {
    if (individuals.empty()) throw data_error("fit survival: no individuals");
    if (model.boundaries.size() < 2)
        throw config_error("fit survival: need at least one interval");
    if (model.boundaries.front() != 0.0)
        throw config_error("fit survival: partition must start at 0");
    for (std::size_t i = 1; i < model.boundaries.size(); ++i)
        if (!(model.boundaries[i] > model.boundaries[i - 1]))
            throw config_error("fit survival: boundaries must be strictly increasing");
    if (!(model.nu > 0.0)) throw config_error("fit survival: nu must be positive");

    const Eigen::Index p = individuals.front().x.size();
    for (std::size_t j = 0; j < individuals.size(); ++j) {
        if (individuals[j].x.size() != p)
            throw data_error("fit survival: individual " + std::to_string(j + 1) +
                             ": covariate dimension differs from the first row");
        if (!(individuals[j].time > 0.0) || !std::isfinite(individuals[j].time))
            throw data_error("fit survival: individual " + std::to_string(j + 1) +
                             ": time must be positive and finite");
        if (individuals[j].time > model.boundaries.back())
            throw data_error("fit survival: individual " + std::to_string(j + 1) +
                             ": time exceeds the partition endpoint");
    }
    const Eigen::Index dim = 1 + p;
    if (model.m0.size() != dim || model.P0.rows() != dim || model.P0.cols() != dim)
        throw config_error("fit survival: m0/P0 dimension must be 1 + #covariates");
    if (model.omega_spec == eng::OmegaSpec::Fixed) {
        if (model.Omega.rows() != dim || model.Omega.cols() != dim)
            throw config_error("fit survival: Omega dimension must be 1 + #covariates");
    } else if (!(model.delta > 0.0) || model.delta > 1.0) {
        throw config_error("fit survival: discount delta must be in (0, 1]");
    }
}

}  // namespace

SurvivalFit fit_survival(const SurvivalModel& model,
                         const std::vector<Individual>& individuals) {
    validate_model(model, individuals);
    const auto& weibull = fam::weibull_family();
    ObsContext ctx;
    ctx.nu = model.nu;

    SurvivalFit fit;
    const int n_intervals = static_cast<int>(model.boundaries.size()) - 1;
    fit.interval_states.reserve(static_cast<std::size_t>(n_intervals));

    ss::StateMoments state{model.m0, model.P0};
    state.P = ss::ensure_psd(state.P, &fit.warnings, 0, "initial covariance");

    for (int t = 1; t <= n_intervals; ++t) {
        const double left = model.boundaries[static_cast<std::size_t>(t - 1)];
        const double right = model.boundaries[static_cast<std::size_t>(t)];

        Eigen::MatrixXd Omega =
            model.omega_spec == eng::OmegaSpec::Fixed
                ? model.Omega
                : ss::discount_innovation(state.P, model.delta);
        Eigen::VectorXd h = state.m;
        Eigen::MatrixXd R =
            ss::ensure_psd(state.P + Omega, &fit.warnings, t, "evolved covariance");

        for (std::size_t j = 0; j < individuals.size(); ++j) {
            const Individual& ind = individuals[j];
            if (!(ind.time > left)) continue;  // no longer at risk

            // The published link puts F'theta on the log-hazard (rate)
            // scale; the Weibull predictor is the log scale, so the design
            // enters negated.
            Eigen::VectorXd design(1 + ind.x.size());
            design(0) = -1.0;
            for (Eigen::Index i = 0; i < ind.x.size(); ++i)
                design(i + 1) = -ind.x(i);

            const auto [f, q] = ss::predictor_moments(h, R, design);
            const ConjugateParams prior = weibull.conjugate_from_moments(
                {f, q}, ctx, ClampPolicy::Error, &fit.warnings, t);

            CurvePoint point;
            point.individual = static_cast<int>(j) + 1;
            point.interval = t;
            point.r = prior.r;
            point.s = prior.s;
            point.survivor_at_end =
                survivor_prediction(prior.r, prior.s, right - left, model.nu);

            const bool event_here = !ind.censored && ind.time <= right;
            if (event_here) {
                const double gap = ind.time - left;
                weibull.validate_observation(gap, ctx);
                const ConjugateParams post =
                    weibull.posterior_params(prior, gap, ctx);
                const PredictorMoments updated =
                    weibull.posterior_predictor_moments(post, ctx, model.approx);
                const ss::StateMoments next = ss::bayes_linear_update(
                    h, R, design, {f, q}, updated, &fit.warnings, t);
                h = next.m;
                R = next.P;
                point.updated = true;
            }
            fit.curves.push_back(point);
        }

        state.m = h;
        state.P = R;
        fit.interval_states.push_back(state);
    }
    return fit;
}

}  // namespace dglm::surv
