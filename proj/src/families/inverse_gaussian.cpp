#include <cmath>
#include <limits>
#include <numbers>

#include "dglm/numeric_oracle.hpp"
#include "family_common.hpp"

namespace dglm::fam {
namespace {

/// Inverse-Gaussian responses with known shape lambda: y ~ IG(mu, lambda).
/// The conjugate prior lives on the natural parameter gamma = -1/mu^2 with
/// density kappa(r, s) exp(r gamma + 2 s sqrt(-gamma)) on gamma < 0, which
/// is exp(-r/mu^2 + 2 s/mu) times the Jacobian 2/mu^3 in mu coordinates;
/// r > 0 and s >= 0. The update absorbs the likelihood exponent
/// (lambda y / 2) gamma + lambda sqrt(-gamma), so (r, s) -> (r + lambda y/2,
/// s + lambda/2). Closed-form moment matching is not available for this
/// family; it runs in the pure conjugate-discount mode.
class InverseGaussianFamily final : public ResponseFamily {
  public:
    std::string_view name() const override { return "inverse-gaussian"; }
    bool is_discrete() const override { return false; }
    bool has_closed_moment_matching() const override { return false; }
    bool has_closed_forecast_moments() const override { return false; }

    void validate_context(const ObsContext& ctx) const override {
        if (!(ctx.lambda > 0.0)) {
            throw config_error(
                "inverse-gaussian: shape lambda must be positive");
        }
    }

    void validate_observation(double y, const ObsContext&) const override {
        if (!(y > 0.0) || !std::isfinite(y)) {
            throw data_error(
                "inverse-gaussian: observation must be positive");
        }
    }

    void validate_params(const ConjugateParams& p,
                         const ObsContext&) const override {
        detail::require_param(std::isfinite(p.r) && std::isfinite(p.s) &&
                                  p.r > 0.0 && p.s >= 0.0,
                              "inverse-gaussian",
                              "requires r > 0 and s >= 0");
    }

    ConjugateParams conjugate_from_moments(const PredictorMoments&,
                                           const ObsContext&, ClampPolicy,
                                           std::vector<Warning>*,
                                           long long) const override {
        throw unsupported_capability(
            "inverse-gaussian: closed-form moment matching is not "
            "available; use the conjugate-discount mode");
    }

    PredictorMoments matching_moments(const ConjugateParams&,
                                      const ObsContext&) const override {
        throw unsupported_capability(
            "inverse-gaussian: closed-form moment matching is not "
            "available; use the conjugate-discount mode");
    }

    ConjugateParams posterior_params(const ConjugateParams& prior, double y,
                                     const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        return {prior.r + 0.5 * ctx.lambda * y, prior.s + 0.5 * ctx.lambda};
    }

    PredictorMoments posterior_predictor_moments(const ConjugateParams&,
                                                 const ObsContext&,
                                                 ApproxMode) const override {
        throw unsupported_capability(
            "inverse-gaussian: predictor moments have no closed form; use "
            "the conjugate-discount mode");
    }

    double forecast_logdensity(const ConjugateParams& p, double y,
                               const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        validate_params(p, ctx);
        const double lam = ctx.lambda;
        const ConjugateParams post = posterior_params(p, y, ctx);
        return 0.5 * (std::log(lam) - detail::kLog2Pi - 3.0 * std::log(y)) -
               0.5 * lam / y + log_kappa(p) - log_kappa(post);
    }

    ForecastMoments forecast_moments(const ConjugateParams& p,
                                     const ObsContext& ctx) const override {
        validate_params(p, ctx);
        // E(y) = E(mu); the second predictive moment diverges (E(mu^3)
        // already does), so no variance is reported.
        ForecastMoments out;
        out.mean = prior_state_mean(p);
        out.mean_defined = true;
        out.variance_defined = false;
        return out;
    }

    double forecast_cdf(const ConjugateParams& p, double y,
                        const ObsContext& ctx) const override {
        validate_params(p, ctx);
        if (!(y > 0.0)) return 0.0;
        const auto density = [&](double t) {
            return std::exp(forecast_logdensity(p, t, ctx));
        };
        const auto res = oracle::integrate(density, 0.0, y, 1e-10);
        return std::min(res.value, 1.0);
    }

    ConjugateParams power_discount(const ConjugateParams& post, double delta,
                                   const ObsContext&, const ObsContext&,
                                   ApproxMode) const override {
        // The prior is a two-parameter exponential family in gamma with no
        // density prefactor, so the delta-power stays in the family with
        // both parameters scaled.
        return {delta * post.r, delta * post.s};
    }

    double transition_logdensity(double mu_now, double mu_prev, double Omega,
                                 const ObsContext&,
                                 const ObsContext&) const override {
        if (!(mu_now > 0.0 && mu_prev > 0.0)) {
            throw numeric_error(
                "inverse-gaussian: transition state must be positive");
        }
        return detail::lognormal_logpdf(mu_now, std::log(mu_prev), Omega);
    }

    double obs_logdensity(double y, double mu,
                          const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        const double lam = ctx.lambda;
        const double d = y - mu;
        return 0.5 * (std::log(lam) - detail::kLog2Pi - 3.0 * std::log(y)) -
               lam * d * d / (2.0 * mu * mu * y);
    }

    double plugin_state(const ConjugateParams& post,
                        const ObsContext& ctx) const override {
        validate_params(post, ctx);
        return prior_state_mean(post);
    }

    double evolve_state(double mu_prev, double omega) const override {
        return mu_prev * std::exp(omega);
    }

    double sample_obs(double mu, const ObsContext& ctx,
                      Philox4x32& rng) const override {
        // Michael-Schucany-Haas construction: one chi-square root picks one
        // of the two roots of the transform; no rejection.
        const double lam = ctx.lambda;
        const double z = rng.next_normal();
        const double w = z * z;
        const double x1 =
            mu + mu * mu * w / (2.0 * lam) -
            (mu / (2.0 * lam)) *
                std::sqrt(4.0 * mu * lam * w + mu * mu * w * w);
        const double u = rng.next_uniform();
        if (u <= mu / (mu + x1)) return x1;
        return mu * mu / x1;
    }

  private:
    /// log of kappa(r, s) = r / (1 + s sqrt(pi/r) e^{s^2/r}
    /// (1 + erf(s/sqrt(r)))), the reciprocal normalizer of the gamma-space
    /// prior density.
    static double log_kappa(const ConjugateParams& p) {
        // The e^{s^2/r} factor overflows for large s^2/r; fold it into log
        // space. 1 + x with log x large is handled through log1p(exp(.)).
        const double log_tail = p.s > 0.0
                                    ? std::log(p.s) +
                                          0.5 * (std::log(std::numbers::pi) -
                                                 std::log(p.r)) +
                                          p.s * p.s / p.r +
                                          std::log1p(std::erf(
                                              p.s / std::sqrt(p.r)))
                                    : -std::numeric_limits<double>::infinity();
        double log_denom;
        if (log_tail > 700.0) {
            log_denom = log_tail;
        } else {
            log_denom = std::log1p(std::exp(log_tail));
        }
        return std::log(p.r) - log_denom;
    }

    /// E(mu) under the (r, s) prior; reduces to sqrt(pi r) at s = 0.
    static double prior_state_mean(const ConjugateParams& p) {
        const double log_mean =
            log_kappa(p) + p.s * p.s / p.r +
            0.5 * (std::log(std::numbers::pi) - std::log(p.r)) +
            std::log1p(std::erf(p.s / std::sqrt(p.r)));
        return std::exp(log_mean);
    }
};

}  // namespace

const ResponseFamily& inverse_gaussian_family() {
    static const InverseGaussianFamily instance;
    return instance;
}

}  // namespace dglm::fam
