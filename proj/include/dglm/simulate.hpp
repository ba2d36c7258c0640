#pragma once

#include <cstdint>
#include <vector>

#include "dglm/families.hpp"
#include "dglm/rng.hpp"
#include "dglm/types.hpp"

namespace dglm::sim {

/// A simulated series: latent states and observations for t = 1..T.
struct SimResult {
    std::vector<double> state_path;
    std::vector<double> y;
};

/// Negative-binomial random-walk series. The initial success probability is
/// drawn from Beta(2, 1) (inverse-CDF: sqrt of a uniform), then each step
/// applies a N(0, Omega) shock to the log odds and draws a count with `n`
/// failures. Draw order per step is fixed (shock, then observation) so a
/// seed pins the whole series.
SimResult simulate_negative_binomial(int T, double n, double Omega,
                                     std::uint64_t seed);

/// Weibull series with shape `nu`: the scale follows a multiplicative
/// log-normal random walk lambda_t = exp(omega_t) lambda_{t-1} starting from
/// `lambda0`, and y_t^nu is exponential with mean lambda_t.
SimResult simulate_weibull(int T, double nu, double lambda0, double Omega,
                           std::uint64_t seed);

/// Generic driver: evolves the family's state with N(0, Omega) shocks and
/// samples observations under `ctx`. state0 is on the family's natural state
/// scale (probability, rate, mean, ...).
struct SimSpec {
    const fam::ResponseFamily* family{nullptr};
    int T{0};
    double state0{1.0};
    double Omega{1.0};
    ObsContext ctx;
    std::uint64_t seed{0};
};

SimResult simulate_generic(const SimSpec& spec);

}  // namespace dglm::sim
