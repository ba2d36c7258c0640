#include "dglm/simulate.hpp"

#include <cmath>
#include <string>

namespace dglm::sim {

namespace {

void check_common(int T, double Omega) {
    if (T < 1) throw config_error("simulate: T must be >= 1");
    if (!(Omega >= 0.0) || !std::isfinite(Omega))
        throw config_error("simulate: Omega must be finite and >= 0");
}

SimResult run(const fam::ResponseFamily& family, int T, double state0,
              double Omega, const ObsContext& ctx, Philox4x32& rng) {
    const double sd = std::sqrt(Omega);
    SimResult out;
    out.state_path.reserve(static_cast<std::size_t>(T));
    out.y.reserve(static_cast<std::size_t>(T));
    double state = state0;
    for (int t = 1; t <= T; ++t) {
        const double omega = sd * rng.next_normal();
        state = family.evolve_state(state, omega);
        out.state_path.push_back(state);
        out.y.push_back(family.sample_obs(state, ctx, rng));
    }
    return out;
}

}  // namespace

SimResult simulate_negative_binomial(int T, double n, double Omega,
                                     std::uint64_t seed) {
    check_common(T, Omega);
    if (!(n >= 1.0) || n != std::floor(n))
        throw config_error("simulate: negative-binomial n must be a positive integer");
    Philox4x32 rng(seed);
    // Beta(2, 1) by inverse CDF: F(x) = x^2 on (0, 1).
    const double pi0 = std::sqrt(rng.next_uniform());
    ObsContext ctx;
    ctx.n = n;
    return run(fam::negative_binomial_family(), T, pi0, Omega, ctx, rng);
}

SimResult simulate_weibull(int T, double nu, double lambda0, double Omega,
                           std::uint64_t seed) {
    check_common(T, Omega);
    if (!(nu > 0.0)) throw config_error("simulate: Weibull nu must be positive");
    if (!(lambda0 > 0.0))
        throw config_error("simulate: initial scale lambda0 must be positive");
    Philox4x32 rng(seed);
    ObsContext ctx;
    ctx.nu = nu;
    return run(fam::weibull_family(), T, lambda0, Omega, ctx, rng);
}

SimResult simulate_generic(const SimSpec& spec) {
    if (spec.family == nullptr) throw config_error("simulate: family is required");
    check_common(spec.T, spec.Omega);
    spec.family->validate_context(spec.ctx);
    Philox4x32 rng(spec.seed);
    return run(*spec.family, spec.T, spec.state0, spec.Omega, spec.ctx, rng);
}

}  // namespace dglm::sim
