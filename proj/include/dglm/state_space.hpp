#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "dglm/types.hpp"

namespace dglm::ss {

/// Linear state evolution for the predictor: eta_t = F'theta_t,
/// theta_t = G theta_{t-1} + omega_t with Var(omega_t) = Omega.
struct StateSpaceModel {
    Eigen::VectorXd F;
    Eigen::MatrixXd G;
    Eigen::MatrixXd Omega;
    Eigen::VectorXd m0;
    Eigen::MatrixXd P0;

    Eigen::Index dim() const { return F.size(); }
};

/// First two moments of the state.
struct StateMoments {
    Eigen::VectorXd m;
    Eigen::MatrixXd P;
};

/// Dimension and positive-semidefiniteness checks; throws config_error.
void validate(const StateSpaceModel& model);

/// Symmetrize M and clamp slightly negative eigenvalues to zero.
/// Eigenvalues below -1e-10 throw numeric_error; values in [-1e-10, 0)
/// are clamped with a warning appended to *warnings when provided.
Eigen::MatrixXd ensure_psd(const Eigen::MatrixXd& M,
                           std::vector<Warning>* warnings = nullptr,
                           long long t = -1, const char* label = "covariance");

/// Evolution step: h = G m, R = G P G' + Omega.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> propagate(
    const StateMoments& prev, const Eigen::MatrixXd& G,
    const Eigen::MatrixXd& Omega, std::vector<Warning>* warnings = nullptr,
    long long t = -1);

/// Predictor moments f = F'h, q = F'RF. Throws numeric_error when q <= 0
/// (degenerate design, e.g. F = 0).
PredictorMoments predictor_moments(const Eigen::VectorXd& h,
                                   const Eigen::MatrixXd& R,
                                   const Eigen::VectorXd& F);

/// Linear-Bayes posterior for the state given the predictor-moment change
/// (f, q) -> (f*, q*):
///   m = h + R F (f* - f)/q,  P = R - R F F' R (1 - q*/q)/q.
StateMoments bayes_linear_update(const Eigen::VectorXd& h,
                                 const Eigen::MatrixXd& R,
                                 const Eigen::VectorXd& F,
                                 const PredictorMoments& prior,
                                 const PredictorMoments& posterior,
                                 std::vector<Warning>* warnings = nullptr,
                                 long long t = -1);

/// ell-step-ahead predictor moments:
///   f(ell) = F'G^ell m,
///   q(ell) = F'(G^ell P (G^ell)' + sum_{j=0}^{ell-1} G^j Omega (G^j)') F.
PredictorMoments k_step_predictor(const StateMoments& current,
                                  const StateSpaceModel& model, int ell);

/// d=1 random walk: F=1, G=1, innovation variance omega.
StateSpaceModel build_random_walk(double omega = 0.0);

/// Local linear trend: F=[1,0]', G=[[1,1],[0,1]], Omega=diag(level, slope).
StateSpaceModel build_linear_trend(double omega_level = 0.0,
                                   double omega_slope = 0.0);

/// Linear trend plus a full harmonic seasonal of even period `cycle`:
/// one 2x2 rotation block per frequency 2*pi*j/cycle (j=1..cycle/2-1) and a
/// scalar -1 Nyquist block. F picks the level, each harmonic's first
/// component and the Nyquist component. Omega = blockdiag(omega_trend I_2,
/// omega_seas I_{cycle-1}).
StateSpaceModel build_trend_harmonics(int cycle, double omega_trend,
                                      double omega_seas);

/// Discount-specified innovation: Omega_t = (1 - delta)/delta * P_prev.
Eigen::MatrixXd discount_innovation(const Eigen::MatrixXd& P_prev,
                                    double delta);

}  // namespace dglm::ss
