#include <cmath>

#include "family_common.hpp"

namespace dglm::fam {
namespace {

/// Pareto responses on [1, inf) with density lambda y^-(lambda+1), exponent
/// lambda ~ Gamma(s + 1, r) with r > 0 and s > -1. Matching on (f, q) =
/// (E log lambda, Var log lambda) solves to r = e^-f / q, s = (1 - q)/q,
/// inside the domain for every finite (f, q). The predictive mean of y
/// itself diverges whenever P(lambda <= 1) > 0, so forecast moments are
/// reported for log y, whose predictive is Lomax with shape s + 1 and
/// scale r.
class ParetoFamily final : public ResponseFamily {
  public:
    std::string_view name() const override { return "pareto"; }
    bool is_discrete() const override { return false; }
    ForecastStat forecast_stat() const override { return ForecastStat::LogY; }

    void validate_observation(double y, const ObsContext&) const override {
        if (!(y >= 1.0) || !std::isfinite(y)) {
            throw data_error("pareto: observation must lie in [1, inf)");
        }
    }

    void validate_params(const ConjugateParams& p,
                         const ObsContext&) const override {
        detail::require_param(std::isfinite(p.r) && std::isfinite(p.s) &&
                                  p.r > 0.0 && p.s + 1.0 > 0.0,
                              "pareto", "requires r > 0 and s + 1 > 0");
    }

    ConjugateParams conjugate_from_moments(const PredictorMoments& moments,
                                           const ObsContext& ctx,
                                           ClampPolicy /*policy*/,
                                           std::vector<Warning>* /*warnings*/,
                                           long long /*t*/) const override {
        const ConjugateParams out{std::exp(-moments.f) / moments.q,
                                  (1.0 - moments.q) / moments.q};
        validate_params(out, ctx);
        return out;
    }

    PredictorMoments matching_moments(const ConjugateParams& p,
                                      const ObsContext& ctx) const override {
        validate_params(p, ctx);
        return {std::log((p.s + 1.0) / p.r), 1.0 / (p.s + 1.0)};
    }

    ConjugateParams posterior_params(const ConjugateParams& prior, double y,
                                     const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        return {prior.r + std::log(y), prior.s + 1.0};
    }

    PredictorMoments posterior_predictor_moments(
        const ConjugateParams& p, const ObsContext& ctx,
        ApproxMode mode) const override {
        validate_params(p, ctx);
        return {sf::digamma(p.s + 1.0, mode) - std::log(p.r),
                sf::trigamma(p.s + 1.0, mode)};
    }

    double forecast_logdensity(const ConjugateParams& p, double y,
                               const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        return std::log(p.s + 1.0) + (p.s + 1.0) * std::log(p.r) -
               std::log(y) - (p.s + 2.0) * std::log(p.r + std::log(y));
    }

    ForecastMoments forecast_moments(const ConjugateParams& p,
                                     const ObsContext& ctx) const override {
        validate_params(p, ctx);
        ForecastMoments out;
        out.stat = ForecastStat::LogY;
        out.mean_defined = p.s > 0.0;
        if (out.mean_defined) out.mean = p.r / p.s;
        out.variance_defined = p.s > 1.0;
        if (out.variance_defined) {
            out.variance =
                p.r * p.r * (p.s + 1.0) / (p.s * p.s * (p.s - 1.0));
        }
        return out;
    }

    double forecast_cdf(const ConjugateParams& p, double y,
                        const ObsContext& ctx) const override {
        validate_params(p, ctx);
        if (!(y > 1.0)) return 0.0;
        return 1.0 - std::pow(p.r / (p.r + std::log(y)), p.s + 1.0);
    }

    double forecast_quantile(const ConjugateParams& p, double prob,
                             const ObsContext& ctx) const override {
        if (!(prob > 0.0 && prob < 1.0)) {
            throw config_error("forecast_quantile: p must lie in (0,1)");
        }
        validate_params(p, ctx);
        return std::exp(p.r *
                        (std::pow(1.0 - prob, -1.0 / (p.s + 1.0)) - 1.0));
    }

    ConjugateParams power_discount(const ConjugateParams& post, double delta,
                                   const ObsContext&, const ObsContext&,
                                   ApproxMode) const override {
        // Gamma(s + 1, r)^delta renormalizes to Gamma(d s + 1, d r); the
        // published map coincides.
        return {delta * post.r, delta * post.s};
    }

    double transition_logdensity(double lam_now, double lam_prev, double Omega,
                                 const ObsContext&,
                                 const ObsContext&) const override {
        // Evolution is a Gaussian random walk on phi = log(1 - 1/lambda),
        // which confines the walk to lambda > 1; the Jacobian is
        // 1/(lambda (lambda - 1)).
        if (!(lam_now > 1.0 && lam_prev > 1.0)) {
            throw numeric_error(
                "pareto: transition state must exceed 1 (random walk on "
                "log(1 - 1/lambda))");
        }
        const double phi_now = std::log1p(-1.0 / lam_now);
        const double phi_prev = std::log1p(-1.0 / lam_prev);
        return detail::normal_logpdf(phi_now, phi_prev, Omega) -
               std::log(lam_now) - std::log(lam_now - 1.0);
    }

    double obs_logdensity(double y, double lam,
                          const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        return std::log(lam) - (lam + 1.0) * std::log(y);
    }

    double plugin_state(const ConjugateParams& post,
                        const ObsContext& ctx) const override {
        validate_params(post, ctx);
        return (post.s + 1.0) / post.r;
    }

    double evolve_state(double lam_prev, double omega) const override {
        const double denom =
            lam_prev * std::exp(omega) - lam_prev + 1.0;
        if (!(denom > 0.0)) {
            throw numeric_error(
                "pareto: state evolution left the support lambda > 1");
        }
        return lam_prev * std::exp(omega) / denom;
    }

    double sample_obs(double lam, const ObsContext&,
                      Philox4x32& rng) const override {
        const double u = rng.next_uniform();
        return std::pow(1.0 - u, -1.0 / lam);
    }
};

/// Beta(lambda, 1) responses through y = 1/x: x in (0, 1) maps to
/// y ~ Pareto(lambda) on [1, inf), so the conjugate machinery delegates to
/// the Pareto family with the transform Jacobian y^2 applied to densities.
class BetaInverseFamily final : public ResponseFamily {
  public:
    std::string_view name() const override { return "beta-inverse"; }
    bool is_discrete() const override { return false; }
    ForecastStat forecast_stat() const override { return ForecastStat::LogY; }

    void validate_observation(double x, const ObsContext&) const override {
        if (!(x > 0.0 && x < 1.0)) {
            throw data_error("beta-inverse: observation must lie in (0,1)");
        }
    }

    void validate_params(const ConjugateParams& p,
                         const ObsContext& ctx) const override {
        base().validate_params(p, ctx);
    }

    ConjugateParams conjugate_from_moments(const PredictorMoments& moments,
                                           const ObsContext& ctx,
                                           ClampPolicy policy,
                                           std::vector<Warning>* warnings,
                                           long long t) const override {
        return base().conjugate_from_moments(moments, ctx, policy, warnings,
                                             t);
    }

    PredictorMoments matching_moments(const ConjugateParams& p,
                                      const ObsContext& ctx) const override {
        return base().matching_moments(p, ctx);
    }

    ConjugateParams posterior_params(const ConjugateParams& prior, double x,
                                     const ObsContext& ctx) const override {
        validate_observation(x, ctx);
        return base().posterior_params(prior, transform(x), ctx);
    }

    PredictorMoments posterior_predictor_moments(
        const ConjugateParams& p, const ObsContext& ctx,
        ApproxMode mode) const override {
        return base().posterior_predictor_moments(p, ctx, mode);
    }

    double forecast_logdensity(const ConjugateParams& p, double x,
                               const ObsContext& ctx) const override {
        validate_observation(x, ctx);
        const double y = transform(x);
        return base().forecast_logdensity(p, y, ctx) + 2.0 * std::log(y);
    }

    ForecastMoments forecast_moments(const ConjugateParams& p,
                                     const ObsContext& ctx) const override {
        // Moments of log(1/x), the underlying Pareto log statistic.
        return base().forecast_moments(p, ctx);
    }

    double forecast_cdf(const ConjugateParams& p, double x,
                        const ObsContext& ctx) const override {
        if (!(x > 0.0)) return 0.0;
        if (!(x < 1.0)) return 1.0;
        return 1.0 - base().forecast_cdf(p, transform(x), ctx);
    }

    double forecast_quantile(const ConjugateParams& p, double prob,
                             const ObsContext& ctx) const override {
        return 1.0 / base().forecast_quantile(p, 1.0 - prob, ctx);
    }

    ConjugateParams power_discount(const ConjugateParams& post, double delta,
                                   const ObsContext& ctx_now,
                                   const ObsContext& ctx_next,
                                   ApproxMode mode) const override {
        return base().power_discount(post, delta, ctx_now, ctx_next, mode);
    }

    double transition_logdensity(double lam_now, double lam_prev, double Omega,
                                 const ObsContext& ctx_now,
                                 const ObsContext& ctx_prev) const override {
        return base().transition_logdensity(lam_now, lam_prev, Omega, ctx_now,
                                            ctx_prev);
    }

    double obs_logdensity(double x, double lam,
                          const ObsContext& ctx) const override {
        validate_observation(x, ctx);
        const double y = transform(x);
        return base().obs_logdensity(y, lam, ctx) + 2.0 * std::log(y);
    }

    double plugin_state(const ConjugateParams& post,
                        const ObsContext& ctx) const override {
        return base().plugin_state(post, ctx);
    }

    double evolve_state(double lam_prev, double omega) const override {
        return base().evolve_state(lam_prev, omega);
    }

    double sample_obs(double lam, const ObsContext& ctx,
                      Philox4x32& rng) const override {
        return 1.0 / base().sample_obs(lam, ctx, rng);
    }

  private:
    static const ResponseFamily& base() { return pareto_family(); }
    static double transform(double x) { return 1.0 / x; }
};

/// Beta(1, lambda) responses through y = 1/(1 - x); same delegation as
/// BetaInverseFamily with the complementary transform.
class BetaComplementFamily final : public ResponseFamily {
  public:
    std::string_view name() const override { return "beta-complement"; }
    bool is_discrete() const override { return false; }
    ForecastStat forecast_stat() const override { return ForecastStat::LogY; }

    void validate_observation(double x, const ObsContext&) const override {
        if (!(x > 0.0 && x < 1.0)) {
            throw data_error(
                "beta-complement: observation must lie in (0,1)");
        }
    }

    void validate_params(const ConjugateParams& p,
                         const ObsContext& ctx) const override {
        base().validate_params(p, ctx);
    }

    ConjugateParams conjugate_from_moments(const PredictorMoments& moments,
                                           const ObsContext& ctx,
                                           ClampPolicy policy,
                                           std::vector<Warning>* warnings,
                                           long long t) const override {
        return base().conjugate_from_moments(moments, ctx, policy, warnings,
                                             t);
    }

    PredictorMoments matching_moments(const ConjugateParams& p,
                                      const ObsContext& ctx) const override {
        return base().matching_moments(p, ctx);
    }

    ConjugateParams posterior_params(const ConjugateParams& prior, double x,
                                     const ObsContext& ctx) const override {
        validate_observation(x, ctx);
        return base().posterior_params(prior, transform(x), ctx);
    }

    PredictorMoments posterior_predictor_moments(
        const ConjugateParams& p, const ObsContext& ctx,
        ApproxMode mode) const override {
        return base().posterior_predictor_moments(p, ctx, mode);
    }

    double forecast_logdensity(const ConjugateParams& p, double x,
                               const ObsContext& ctx) const override {
        validate_observation(x, ctx);
        const double y = transform(x);
        return base().forecast_logdensity(p, y, ctx) + 2.0 * std::log(y);
    }

    ForecastMoments forecast_moments(const ConjugateParams& p,
                                     const ObsContext& ctx) const override {
        // Moments of -log(1 - x), the underlying Pareto log statistic.
        return base().forecast_moments(p, ctx);
    }

    double forecast_cdf(const ConjugateParams& p, double x,
                        const ObsContext& ctx) const override {
        if (!(x > 0.0)) return 0.0;
        if (!(x < 1.0)) return 1.0;
        return base().forecast_cdf(p, transform(x), ctx);
    }

    double forecast_quantile(const ConjugateParams& p, double prob,
                             const ObsContext& ctx) const override {
        return 1.0 - 1.0 / base().forecast_quantile(p, prob, ctx);
    }

    ConjugateParams power_discount(const ConjugateParams& post, double delta,
                                   const ObsContext& ctx_now,
                                   const ObsContext& ctx_next,
                                   ApproxMode mode) const override {
        return base().power_discount(post, delta, ctx_now, ctx_next, mode);
    }

    double transition_logdensity(double lam_now, double lam_prev, double Omega,
                                 const ObsContext& ctx_now,
                                 const ObsContext& ctx_prev) const override {
        return base().transition_logdensity(lam_now, lam_prev, Omega, ctx_now,
                                            ctx_prev);
    }

    double obs_logdensity(double x, double lam,
                          const ObsContext& ctx) const override {
        validate_observation(x, ctx);
        const double y = transform(x);
        return base().obs_logdensity(y, lam, ctx) + 2.0 * std::log(y);
    }

    double plugin_state(const ConjugateParams& post,
                        const ObsContext& ctx) const override {
        return base().plugin_state(post, ctx);
    }

    double evolve_state(double lam_prev, double omega) const override {
        return base().evolve_state(lam_prev, omega);
    }

    double sample_obs(double lam, const ObsContext& ctx,
                      Philox4x32& rng) const override {
        return 1.0 - 1.0 / base().sample_obs(lam, ctx, rng);
    }

  private:
    static const ResponseFamily& base() { return pareto_family(); }
    static double transform(double x) { return 1.0 / (1.0 - x); }
};

}  // namespace

const ResponseFamily& pareto_family() {
    static const ParetoFamily instance;
    return instance;
}

const ResponseFamily& beta_inverse_family() {
    static const BetaInverseFamily instance;
    return instance;
}

const ResponseFamily& beta_complement_family() {
    static const BetaComplementFamily instance;
    return instance;
}

}  // namespace dglm::fam
