#include <cmath>

#include "family_common.hpp"

namespace dglm::fam {
namespace {

using detail::logistic;
using detail::logit;

/// Binomial responses, success probability pi ~ Beta(r, s - r) with s > r > 0.
/// Moment matching for (f, q) = (E logit pi, Var logit pi) solves to
/// r = (1 + e^f)/q and s = (2 + e^f + e^-f)/q, which satisfies s > r > 0 for
/// every finite (f, q); the conjugate domain can only be left by overflow.
class BinomialFamily final : public ResponseFamily {
  public:
    std::string_view name() const override { return "binomial"; }
    bool is_discrete() const override { return true; }

    void validate_context(const ObsContext& ctx) const override {
        if (!(ctx.n >= 1.0) || ctx.n != std::floor(ctx.n)) {
            throw config_error("binomial: count n must be a positive integer");
        }
    }

    void validate_observation(double y, const ObsContext& ctx) const override {
        detail::require_integer_count(y, ctx.n, "binomial");
    }

    void validate_params(const ConjugateParams& p,
                         const ObsContext&) const override {
        detail::require_param(std::isfinite(p.r) && std::isfinite(p.s) &&
                                  p.r > 0.0 && p.s > p.r,
                              "binomial", "requires s > r > 0");
    }

    ConjugateParams conjugate_from_moments(const PredictorMoments& moments,
                                           const ObsContext& ctx,
                                           ClampPolicy /*policy*/,
                                           std::vector<Warning>* /*warnings*/,
                                           long long /*t*/) const override {
        const double ef = std::exp(moments.f);
        const ConjugateParams out{(1.0 + ef) / moments.q,
                                  (2.0 + ef + 1.0 / ef) / moments.q};
        validate_params(out, ctx);
        return out;
    }

    PredictorMoments matching_moments(const ConjugateParams& p,
                                      const ObsContext& ctx) const override {
        validate_params(p, ctx);
        return {std::log(p.r / (p.s - p.r)), 1.0 / p.r + 1.0 / (p.s - p.r)};
    }

    ConjugateParams posterior_params(const ConjugateParams& prior, double y,
                                     const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        return {prior.r + y, prior.s + ctx.n};
    }

    PredictorMoments posterior_predictor_moments(
        const ConjugateParams& p, const ObsContext& ctx,
        ApproxMode mode) const override {
        validate_params(p, ctx);
        return {sf::digamma(p.r, mode) - sf::digamma(p.s - p.r, mode),
                sf::trigamma(p.r, mode) + sf::trigamma(p.s - p.r, mode)};
    }

    double forecast_logdensity(const ConjugateParams& p, double y,
                               const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        const double n = ctx.n;
        return sf::log_gamma(n + 1.0) - sf::log_gamma(y + 1.0) -
               sf::log_gamma(n - y + 1.0) +
               sf::log_beta(p.r + y, p.s - p.r + n - y) -
               sf::log_beta(p.r, p.s - p.r);
    }

    ForecastMoments forecast_moments(const ConjugateParams& p,
                                     const ObsContext& ctx) const override {
        validate_params(p, ctx);
        const double mean_pi = p.r / p.s;
        ForecastMoments out;
        out.mean = ctx.n * mean_pi;
        out.variance = ctx.n * mean_pi * (1.0 - mean_pi) * (p.s + ctx.n) /
                       (p.s + 1.0);
        out.mean_defined = true;
        out.variance_defined = true;
        return out;
    }

    double forecast_cdf(const ConjugateParams& p, double y,
                        const ObsContext& ctx) const override {
        if (y < 0.0) return 0.0;
        const double top = std::min(std::floor(y), ctx.n);
        double cum = 0.0;
        for (double k = 0.0; k <= top; k += 1.0) {
            cum += std::exp(forecast_logdensity(p, k, ctx));
        }
        return std::min(cum, 1.0);
    }

    ConjugateParams power_discount(const ConjugateParams& post, double delta,
                                   const ObsContext&, const ObsContext&,
                                   ApproxMode mode) const override {
        // Beta(r, s-r)^delta renormalizes to Beta(d(r-1)+1, d(s-r-1)+1);
        // in (r, s) coordinates the second entry is d(s-2)+2. The published
        // map carries s -> d s + 2 - d instead.
        const double r = delta * (post.r - 1.0) + 1.0;
        if (mode == ApproxMode::PaperApprox) {
            return {r, delta * post.s + 2.0 - delta};
        }
        return {r, delta * (post.s - 2.0) + 2.0};
    }

    double transition_logdensity(double pi_now, double pi_prev, double Omega,
                                 const ObsContext&,
                                 const ObsContext&) const override {
        if (!(pi_now > 0.0 && pi_now < 1.0 && pi_prev > 0.0 && pi_prev < 1.0)) {
            throw numeric_error("binomial: transition state outside (0,1)");
        }
        return detail::normal_logpdf(logit(pi_now), logit(pi_prev), Omega) -
               std::log(pi_now) - std::log1p(-pi_now);
    }

    double obs_logdensity(double y, double pi,
                          const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        const double n = ctx.n;
        return sf::log_gamma(n + 1.0) - sf::log_gamma(y + 1.0) -
               sf::log_gamma(n - y + 1.0) + y * std::log(pi) +
               (n - y) * std::log1p(-pi);
    }

    double plugin_state(const ConjugateParams& post,
                        const ObsContext& ctx) const override {
        validate_params(post, ctx);
        return post.r / post.s;
    }

    double evolve_state(double pi_prev, double omega) const override {
        return logistic(logit(pi_prev) + omega);
    }

    double sample_obs(double pi, const ObsContext& ctx,
                      Philox4x32& rng) const override {
        const auto n = static_cast<long long>(ctx.n);
        double count = 0.0;
        for (long long i = 0; i < n; ++i) {
            if (rng.next_uniform() < pi) count += 1.0;
        }
        return count;
    }
};

}  // namespace

const ResponseFamily& binomial_family() {
    static const BinomialFamily instance;
    return instance;
}

}  // namespace dglm::fam
