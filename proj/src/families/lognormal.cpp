#include <cmath>

#include "family_common.hpp"

namespace dglm::fam {
namespace {

/// Log-normal responses with known log-scale variance V: log y ~ N(lambda, V)
/// and lambda ~ N(r/s, 1/s) with s > 0. The conjugate machinery is the
/// normal family's applied to log y; forecast moments are reported for y
/// itself.
class LogNormalFamily final : public ResponseFamily {
  public:
    std::string_view name() const override { return "lognormal"; }
    bool is_discrete() const override { return false; }

    void validate_context(const ObsContext& ctx) const override {
        if (!(ctx.V > 0.0)) {
            throw config_error(
                "lognormal: log-scale variance V must be positive");
        }
    }

    void validate_observation(double y, const ObsContext&) const override {
        if (!(y > 0.0) || !std::isfinite(y)) {
            throw data_error("lognormal: observation must be positive");
        }
    }

    void validate_params(const ConjugateParams& p,
                         const ObsContext&) const override {
        detail::require_param(std::isfinite(p.r) && std::isfinite(p.s) &&
                                  p.s > 0.0,
                              "lognormal", "requires s > 0");
    }

    ConjugateParams conjugate_from_moments(const PredictorMoments& moments,
                                           const ObsContext& ctx,
                                           ClampPolicy /*policy*/,
                                           std::vector<Warning>* /*warnings*/,
                                           long long /*t*/) const override {
        const ConjugateParams out{moments.f / moments.q, 1.0 / moments.q};
        validate_params(out, ctx);
        return out;
    }

    PredictorMoments matching_moments(const ConjugateParams& p,
                                      const ObsContext& ctx) const override {
        validate_params(p, ctx);
        return {p.r / p.s, 1.0 / p.s};
    }

    ConjugateParams posterior_params(const ConjugateParams& prior, double y,
                                     const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        return {prior.r + std::log(y) / ctx.V, prior.s + 1.0 / ctx.V};
    }

    PredictorMoments posterior_predictor_moments(
        const ConjugateParams& p, const ObsContext& ctx,
        ApproxMode) const override {
        validate_params(p, ctx);
        return {p.r / p.s, 1.0 / p.s};
    }

    double forecast_logdensity(const ConjugateParams& p, double y,
                               const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        return detail::lognormal_logpdf(y, p.r / p.s, ctx.V + 1.0 / p.s);
    }

    ForecastMoments forecast_moments(const ConjugateParams& p,
                                     const ObsContext& ctx) const override {
        validate_params(p, ctx);
        const double m = p.r / p.s;
        const double v = ctx.V + 1.0 / p.s;
        ForecastMoments out;
        out.mean = std::exp(m + 0.5 * v);
        out.variance = std::expm1(v) * std::exp(2.0 * m + v);
        out.mean_defined = true;
        out.variance_defined = true;
        return out;
    }

    double forecast_cdf(const ConjugateParams& p, double y,
                        const ObsContext& ctx) const override {
        validate_params(p, ctx);
        if (!(y > 0.0)) return 0.0;
        const double z =
            (std::log(y) - p.r / p.s) / std::sqrt(ctx.V + 1.0 / p.s);
        return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0)));
    }

    ConjugateParams power_discount(const ConjugateParams& post, double delta,
                                   const ObsContext&, const ObsContext&,
                                   ApproxMode mode) const override {
        const double d = mode == ApproxMode::PaperApprox ? delta * delta
                                                         : delta;
        return {d * post.r, d * post.s};
    }

    double transition_logdensity(double lam_now, double lam_prev, double Omega,
                                 const ObsContext&,
                                 const ObsContext&) const override {
        return detail::normal_logpdf(lam_now, lam_prev, Omega);
    }

    double obs_logdensity(double y, double lam,
                          const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        return detail::lognormal_logpdf(y, lam, ctx.V);
    }

    double plugin_state(const ConjugateParams& post,
                        const ObsContext& ctx) const override {
        validate_params(post, ctx);
        return post.r / post.s;
    }

    double evolve_state(double lam_prev, double omega) const override {
        return lam_prev + omega;
    }

    double sample_obs(double lam, const ObsContext& ctx,
                      Philox4x32& rng) const override {
        return std::exp(lam + std::sqrt(ctx.V) * rng.next_normal());
    }
};

}  // namespace

const ResponseFamily& lognormal_family() {
    static const LogNormalFamily instance;
    return instance;
}

}  // namespace dglm::fam
