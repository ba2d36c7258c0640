#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dglm/engine.hpp"
#include "dglm/state_space.hpp"
#include "dglm/types.hpp"

namespace dglm::surv {

/// Closed-form predicted survivor probability for a remaining lifetime
/// `gap` past the last boundary, under the one-step conjugate prior (r, s)
/// of the Weibull family with shape nu:
///   S = (1 + gap^nu / r)^{-(s-1)}.
/// Requires r > 0, s > 1, gap >= 0; equals 1 at gap = 0, decreases to 0 as
/// the gap grows, and at nu = 1 is the exponential-case prediction.
double survivor_prediction(double r, double s, double gap, double nu);

/// One subject: covariates (may be empty), the event or censoring time, and
/// whether the time is a censoring time.
struct Individual {
    Eigen::VectorXd x;
    double time{0.0};
    bool censored{false};
};

/// Piecewise proportional-hazards model on a partition
/// 0 = b_0 < b_1 < ... < b_T. The state [alpha_t, beta_t']' carries the
/// log baseline hazard and covariate effects and follows a random walk
/// across intervals; each subject's design is [1, x'].
struct SurvivalModel {
    std::vector<double> boundaries;
    double nu{1.0};
    Eigen::VectorXd m0;
    Eigen::MatrixXd P0;
    eng::OmegaSpec omega_spec{eng::OmegaSpec::Fixed};
    Eigen::MatrixXd Omega;
    double delta{1.0};
    ApproxMode approx{ApproxMode::Exact};
};

/// Survivor-curve sample for one subject in one interval, computed from the
/// subject's one-step prior at its processing position.
struct CurvePoint {
    int individual{0};
    int interval{0};
    double r{0.0};
    double s{0.0};
    double survivor_at_end{1.0};
    bool updated{false};
};

struct SurvivalFit {
    std::vector<ss::StateMoments> interval_states;
    std::vector<CurvePoint> curves;
    std::vector<Warning> warnings;
};

/// Filters the shared state across intervals. Within an interval, subjects
/// still at risk are processed in input row order; a subject whose event
/// falls in the interval contributes one Weibull observation update on the
/// within-interval gap, while censored subjects contribute through the risk
/// set only. The published link equates the log hazard with F'theta, so the
/// Weibull scale enters the conjugate machinery through the negated design.
SurvivalFit fit_survival(const SurvivalModel& model,
                         const std::vector<Individual>& individuals);

}  // namespace dglm::surv
