#include <cmath>

#include "family_common.hpp"

namespace dglm::fam {
namespace {

/// Poisson responses, rate lambda ~ Gamma(r, s) (shape r, rate s), r, s > 0.
/// Matching on (f, q) = (E log lambda, Var log lambda) gives r = 1/q,
/// s = e^-f / q; (f, q) with q > 0 always lands inside the domain.
class PoissonFamily final : public ResponseFamily {
  public:
    std::string_view name() const override { return "poisson"; }
    bool is_discrete() const override { return true; }

    void validate_observation(double y, const ObsContext&) const override {
        detail::require_integer_count(y, 0.0, "poisson");
    }

    void validate_params(const ConjugateParams& p,
                         const ObsContext&) const override {
        detail::require_param(std::isfinite(p.r) && std::isfinite(p.s) &&
                                  p.r > 0.0 && p.s > 0.0,
                              "poisson", "requires r > 0 and s > 0");
    }

    ConjugateParams conjugate_from_moments(const PredictorMoments& moments,
                                           const ObsContext& ctx,
                                           ClampPolicy /*policy*/,
                                           std::vector<Warning>* /*warnings*/,
                                           long long /*t*/) const override {
        const ConjugateParams out{1.0 / moments.q,
                                  std::exp(-moments.f) / moments.q};
        validate_params(out, ctx);
        return out;
    }

    PredictorMoments matching_moments(const ConjugateParams& p,
                                      const ObsContext& ctx) const override {
        validate_params(p, ctx);
        return {std::log(p.r / p.s), 1.0 / p.r};
    }

    ConjugateParams posterior_params(const ConjugateParams& prior, double y,
                                     const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        return {prior.r + y, prior.s + 1.0};
    }

    PredictorMoments posterior_predictor_moments(
        const ConjugateParams& p, const ObsContext& ctx,
        ApproxMode mode) const override {
        validate_params(p, ctx);
        return {sf::digamma(p.r, mode) - std::log(p.s),
                sf::trigamma(p.r, mode)};
    }

    double forecast_logdensity(const ConjugateParams& p, double y,
                               const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        // Gamma-Poisson predictive: negative binomial with r successes of
        // probability s/(1+s).
        return sf::log_gamma(p.r + y) - sf::log_gamma(p.r) -
               sf::log_gamma(y + 1.0) + p.r * std::log(p.s / (1.0 + p.s)) -
               y * std::log1p(p.s);
    }

    ForecastMoments forecast_moments(const ConjugateParams& p,
                                     const ObsContext& ctx) const override {
        validate_params(p, ctx);
        ForecastMoments out;
        out.mean = p.r / p.s;
        out.variance = p.r * (p.s + 1.0) / (p.s * p.s);
        out.mean_defined = true;
        out.variance_defined = true;
        return out;
    }

    double forecast_cdf(const ConjugateParams& p, double y,
                        const ObsContext& ctx) const override {
        validate_params(p, ctx);
        if (y < 0.0) return 0.0;
        return sf::inc_beta(p.r, std::floor(y) + 1.0, p.s / (1.0 + p.s));
    }

    ConjugateParams power_discount(const ConjugateParams& post, double delta,
                                   const ObsContext&, const ObsContext&,
                                   ApproxMode) const override {
        // Gamma(r, s)^delta renormalizes to Gamma(d(r-1)+1, d s); the
        // published map coincides.
        return {delta * (post.r - 1.0) + 1.0, delta * post.s};
    }

    double transition_logdensity(double lam_now, double lam_prev, double Omega,
                                 const ObsContext&,
                                 const ObsContext&) const override {
        if (!(lam_now > 0.0 && lam_prev > 0.0)) {
            throw numeric_error("poisson: transition state must be positive");
        }
        return detail::lognormal_logpdf(lam_now, std::log(lam_prev), Omega);
    }

    double obs_logdensity(double y, double lam,
                          const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        return -lam + y * std::log(lam) - sf::log_gamma(y + 1.0);
    }

    double plugin_state(const ConjugateParams& post,
                        const ObsContext& ctx) const override {
        validate_params(post, ctx);
        return post.r / post.s;
    }

    double evolve_state(double lam_prev, double omega) const override {
        return lam_prev * std::exp(omega);
    }

    double sample_obs(double lam, const ObsContext&,
                      Philox4x32& rng) const override {
        // Sequential inverse CDF: one uniform, walk the pmf.
        const double u = rng.next_uniform();
        double p = std::exp(-lam);
        double cum = p;
        double y = 0.0;
        while (u > cum && y < 1e7) {
            y += 1.0;
            p *= lam / y;
            cum += p;
        }
        return y;
    }
};

}  // namespace

const ResponseFamily& poisson_family() {
    static const PoissonFamily instance;
    return instance;
}

}  // namespace dglm::fam
