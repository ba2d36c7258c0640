#include <cmath>

#include "family_common.hpp"

namespace dglm::fam {
namespace {

/// Normal responses with known observation variance V, mean mu ~ N(r/s, 1/s)
/// with s > 0 (r may carry either sign). Matching is the exact identity
/// r = f/q, s = 1/q; conjugacy is exact, so both approximation modes agree
/// on the predictor moments.
class NormalFamily final : public ResponseFamily {
  public:
    std::string_view name() const override { return "normal"; }
    bool is_discrete() const override { return false; }

    void validate_context(const ObsContext& ctx) const override {
        if (!(ctx.V > 0.0)) {
            throw config_error(
                "normal: observation variance V must be positive");
        }
    }

    void validate_observation(double y, const ObsContext&) const override {
        if (!std::isfinite(y)) {
            throw data_error("normal: observation must be finite");
        }
    }

    void validate_params(const ConjugateParams& p,
                         const ObsContext&) const override {
        detail::require_param(std::isfinite(p.r) && std::isfinite(p.s) &&
                                  p.s > 0.0,
                              "normal", "requires s > 0");
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
        return {prior.r + y / ctx.V, prior.s + 1.0 / ctx.V};
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
        return detail::normal_logpdf(y, p.r / p.s, ctx.V + 1.0 / p.s);
    }

    ForecastMoments forecast_moments(const ConjugateParams& p,
                                     const ObsContext& ctx) const override {
        validate_params(p, ctx);
        ForecastMoments out;
        out.mean = p.r / p.s;
        out.variance = ctx.V + 1.0 / p.s;
        out.mean_defined = true;
        out.variance_defined = true;
        return out;
    }

    double forecast_cdf(const ConjugateParams& p, double y,
                        const ObsContext& ctx) const override {
        validate_params(p, ctx);
        const double z = (y - p.r / p.s) / std::sqrt(ctx.V + 1.0 / p.s);
        return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0)));
    }

    double forecast_quantile(const ConjugateParams& p, double prob,
                             const ObsContext& ctx) const override {
        if (!(prob > 0.0 && prob < 1.0)) {
            throw config_error("forecast_quantile: p must lie in (0,1)");
        }
        // Support is the whole line; bisect a widening symmetric bracket.
        const double mean = p.r / p.s;
        const double sd = std::sqrt(ctx.V + 1.0 / p.s);
        double lo = mean - 10.0 * sd;
        double hi = mean + 10.0 * sd;
        while (forecast_cdf(p, lo, ctx) > prob) lo -= 10.0 * sd;
        while (forecast_cdf(p, hi, ctx) < prob) hi += 10.0 * sd;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (forecast_cdf(p, mid, ctx) < prob ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    ConjugateParams power_discount(const ConjugateParams& post, double delta,
                                   const ObsContext&, const ObsContext&,
                                   ApproxMode mode) const override {
        // N(r/s, 1/s)^delta renormalizes to N(r/s, 1/(d s)), i.e. (d r, d s);
        // the published map scales by delta twice.
        const double d = mode == ApproxMode::PaperApprox ? delta * delta
                                                         : delta;
        return {d * post.r, d * post.s};
    }

    double transition_logdensity(double mu_now, double mu_prev, double Omega,
                                 const ObsContext&,
                                 const ObsContext&) const override {
        return detail::normal_logpdf(mu_now, mu_prev, Omega);
    }

    double obs_logdensity(double y, double mu,
                          const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        return detail::normal_logpdf(y, mu, ctx.V);
    }

    double plugin_state(const ConjugateParams& post,
                        const ObsContext& ctx) const override {
        validate_params(post, ctx);
        return post.r / post.s;
    }

    double evolve_state(double mu_prev, double omega) const override {
        return mu_prev + omega;
    }

    double sample_obs(double mu, const ObsContext& ctx,
                      Philox4x32& rng) const override {
        return mu + std::sqrt(ctx.V) * rng.next_normal();
    }
};

}  // namespace

const ResponseFamily& normal_family() {
    static const NormalFamily instance;
    return instance;
}

}  // namespace dglm::fam
