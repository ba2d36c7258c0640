#include "dglm/state_space.hpp"

#include <cmath>
#include <sstream>

namespace dglm::ss {

namespace {

constexpr double kEigenvalueFloor = -1e-10;

void check_psd_input(const Eigen::MatrixXd& M, const char* label) {
    if (M.rows() != M.cols()) {
        throw config_error(std::string(label) + " must be square");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        0.5 * (M + M.transpose()));
    if (solver.eigenvalues().minCoeff() < kEigenvalueFloor) {
        throw config_error(std::string(label) +
                           " is not positive semidefinite");
    }
}

}  // namespace

void validate(const StateSpaceModel& model) {
    const Eigen::Index d = model.F.size();
    if (d == 0) throw config_error("state dimension must be positive");
    if (model.G.rows() != d || model.G.cols() != d) {
        throw config_error("G dimensions inconsistent with F");
    }
    if (model.Omega.rows() != d || model.Omega.cols() != d) {
        throw config_error("Omega dimensions inconsistent with F");
    }
    if (model.m0.size() != d) {
        throw config_error("m0 dimension inconsistent with F");
    }
    if (model.P0.rows() != d || model.P0.cols() != d) {
        throw config_error("P0 dimensions inconsistent with F");
    }
    check_psd_input(model.Omega, "Omega");
    check_psd_input(model.P0, "P0");
}

Eigen::MatrixXd ensure_psd(const Eigen::MatrixXd& M,
                           std::vector<Warning>* warnings, long long t,
                           const char* label) {
    Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    const Eigen::VectorXd& eigenvalues = solver.eigenvalues();
    const double min_eig = eigenvalues.minCoeff();
    if (min_eig >= 0.0) return sym;
    if (min_eig < kEigenvalueFloor) {
        std::ostringstream msg;
        msg << label << " eigenvalue " << min_eig
            << " below tolerance " << kEigenvalueFloor;
        throw numeric_error(msg.str());
    }
    Eigen::VectorXd clamped = eigenvalues.cwiseMax(0.0);
    if (warnings != nullptr) {
        std::ostringstream msg;
        msg << label << " eigenvalue " << min_eig << " clamped to 0";
        warnings->push_back({t, msg.str()});
    }
    return solver.eigenvectors() * clamped.asDiagonal() *
           solver.eigenvectors().transpose();
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> propagate(
    const StateMoments& prev, const Eigen::MatrixXd& G,
    const Eigen::MatrixXd& Omega, std::vector<Warning>* warnings,
    long long t) {
    if (G.cols() != prev.m.size() || Omega.rows() != G.rows()) {
        throw config_error("propagate: dimension mismatch");
    }
    Eigen::VectorXd h = G * prev.m;
    Eigen::MatrixXd R = G * prev.P * G.transpose() + Omega;
    return {std::move(h), ensure_psd(R, warnings, t, "prior covariance")};
}

PredictorMoments predictor_moments(const Eigen::VectorXd& h,
                                   const Eigen::MatrixXd& R,
                                   const Eigen::VectorXd& F) {
    if (F.size() != h.size() || R.rows() != h.size()) {
        throw config_error("predictor_moments: dimension mismatch");
    }
    PredictorMoments moments;
    moments.f = F.dot(h);
    moments.q = F.dot(R * F);
    if (!(moments.q > 0.0)) {
        throw numeric_error("degenerate predictor: F'RF must be positive");
    }
    return moments;
}

StateMoments bayes_linear_update(const Eigen::VectorXd& h,
                                 const Eigen::MatrixXd& R,
                                 const Eigen::VectorXd& F,
                                 const PredictorMoments& prior,
                                 const PredictorMoments& posterior,
                                 std::vector<Warning>* warnings, long long t) {
    if (!(prior.q > 0.0)) {
        throw numeric_error("degenerate predictor: prior q must be positive");
    }
    const Eigen::VectorXd gain = R * F;
    StateMoments out;
    out.m = h + gain * ((posterior.f - prior.f) / prior.q);
    const Eigen::MatrixXd raw =
        R - gain * gain.transpose() * ((1.0 - posterior.q / prior.q) / prior.q);
    out.P = ensure_psd(raw, warnings, t, "posterior covariance");
    return out;
}

PredictorMoments k_step_predictor(const StateMoments& current,
                                  const StateSpaceModel& model, int ell) {
    if (ell < 1) throw config_error("forecast horizon must be >= 1");
    const Eigen::Index d = model.dim();
    Eigen::MatrixXd G_power = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd innovation = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < ell; ++j) {
        innovation += G_power * model.Omega * G_power.transpose();
        G_power = model.G * G_power;
    }
    const Eigen::VectorXd h = G_power * current.m;
    const Eigen::MatrixXd R =
        G_power * current.P * G_power.transpose() + innovation;
    return predictor_moments(h, 0.5 * (R + R.transpose()), model.F);
}

StateSpaceModel build_random_walk(double omega) {
    StateSpaceModel model;
    model.F = Eigen::VectorXd::Ones(1);
    model.G = Eigen::MatrixXd::Ones(1, 1);
    model.Omega = Eigen::MatrixXd::Constant(1, 1, omega);
    model.m0 = Eigen::VectorXd::Zero(1);
    model.P0 = Eigen::MatrixXd::Identity(1, 1);
    return model;
}

StateSpaceModel build_linear_trend(double omega_level, double omega_slope) {
    StateSpaceModel model;
    model.F = Eigen::VectorXd::Zero(2);
    model.F(0) = 1.0;
    model.G = Eigen::MatrixXd::Zero(2, 2);
    model.G << 1.0, 1.0, 0.0, 1.0;
    model.Omega = Eigen::MatrixXd::Zero(2, 2);
    model.Omega(0, 0) = omega_level;
    model.Omega(1, 1) = omega_slope;
    model.m0 = Eigen::VectorXd::Zero(2);
    model.P0 = Eigen::MatrixXd::Identity(2, 2);
    return model;
}

StateSpaceModel build_trend_harmonics(int cycle, double omega_trend,
                                      double omega_seas) {
    if (cycle < 2 || cycle % 2 != 0) {
        throw config_error("seasonal cycle must be even and >= 2");
    }
    const int harmonics = cycle / 2 - 1;
    const Eigen::Index d = 2 + 2 * harmonics + 1;
    StateSpaceModel model;
    model.F = Eigen::VectorXd::Zero(d);
    model.G = Eigen::MatrixXd::Zero(d, d);
    model.Omega = Eigen::MatrixXd::Zero(d, d);
    model.m0 = Eigen::VectorXd::Zero(d);
    model.P0 = Eigen::MatrixXd::Identity(d, d);

    model.F(0) = 1.0;
    model.G(0, 0) = 1.0;
    model.G(0, 1) = 1.0;
    model.G(1, 1) = 1.0;
    model.Omega(0, 0) = omega_trend;
    model.Omega(1, 1) = omega_trend;

    const double pi = std::acos(-1.0);
    // Snap values that are exact at multiples of pi/2 so the harmonic blocks
    // reproduce the textbook rotation matrices bit for bit.
    const auto snap = [](double v) {
        if (std::abs(v) < 1e-15) return 0.0;
        if (std::abs(v - 1.0) < 1e-15) return 1.0;
        if (std::abs(v + 1.0) < 1e-15) return -1.0;
        return v;
    };
    for (int j = 1; j <= harmonics; ++j) {
        const Eigen::Index base = 2 * j;
        const double angle = 2.0 * pi * j / cycle;
        const double c = snap(std::cos(angle));
        const double s = snap(std::sin(angle));
        model.F(base) = 1.0;
        model.G(base, base) = c;
        model.G(base, base + 1) = s;
        model.G(base + 1, base) = -s;
        model.G(base + 1, base + 1) = c;
        model.Omega(base, base) = omega_seas;
        model.Omega(base + 1, base + 1) = omega_seas;
    }
    model.F(d - 1) = 1.0;
    model.G(d - 1, d - 1) = -1.0;
    model.Omega(d - 1, d - 1) = omega_seas;
    return model;
}

Eigen::MatrixXd discount_innovation(const Eigen::MatrixXd& P_prev,
                                    double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw config_error("discount factor must lie in (0, 1]");
    }
    return (1.0 - delta) / delta * P_prev;
}

}  // namespace dglm::ss
