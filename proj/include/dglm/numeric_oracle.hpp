#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "dglm/rng.hpp"

namespace dglm::oracle {

/// Result of one verification: a closed-form value against an independently
/// computed reference. verdict is Pass iff the selected error measure is
/// within tolerance; Inconclusive means the oracle could not certify its own
/// accuracy (term cap hit, quadrature non-convergence).
struct OracleReport {
    std::string target;
    double closed_value{0.0};
    double oracle_value{0.0};
    double abs_error{0.0};
    double rel_error{0.0};
    double tolerance{0.0};
    enum class Verdict { Pass, Fail, Inconclusive } verdict{Verdict::Fail};
    std::string note;
};

enum class ErrorKind { Absolute, Relative };

/// Build a report comparing closed against oracle with the given tolerance.
OracleReport compare(const std::string& target, double closed, double oracle_value,
                     double tolerance, ErrorKind kind = ErrorKind::Relative,
                     bool inconclusive = false, const std::string& note = "");

/// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b].
struct QuadratureResult {
    double value{0.0};
    double error_estimate{0.0};
    std::size_t evaluations{0};
    bool converged{false};
};

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double tol = 1e-10,
                           std::size_t max_intervals = 4000);

/// Integral of f over [a, inf), via the substitution y = a + u/(1-u) with
/// u in (0, 1), dy = du/(1-u)^2.
QuadratureResult integrate_upper(const std::function<double(double)>& f,
                                 double a, double tol = 1e-10,
                                 std::size_t max_intervals = 4000);

/// Partial sums of a pmf over {0, 1, 2, ...} with a certified tail bound.
struct SeriesTotal {
    double value{0.0};       ///< partial sum of the pmf
    double tail_bound{0.0};  ///< certified upper bound on the skipped mass
    std::size_t terms{0};
    bool certified{false};   ///< false when the term cap was reached
};

/// Exact sum of pmf over the finite support {0, ..., y_max}.
SeriesTotal pmf_total_finite(const std::function<double(long long)>& pmf,
                             long long y_max);

/// Sum until a geometric tail bound certifies the remainder below tail_tol.
/// ratio_bound(y) must return a value rho with pmf(k+1)/pmf(k) <= rho < 1
/// for all k >= y. Stops early once pmf(y+1) * rho/(1-rho) < tail_tol.
SeriesTotal pmf_total_ratio(const std::function<double(long long)>& pmf,
                            const std::function<double(long long)>& ratio_bound,
                            double tail_tol, std::size_t cap = 1000000);

/// Sum a pmf with an eventually power-law tail, pmf(y) <= C y^{-exponent}
/// for y at the stopping point and beyond (exponent > 1). The remainder is
/// bounded by the tail integral with a documented safety factor of 2:
///   sum_{k>N} pmf(k) <= 2 * pmf(N) * N^{exponent} * N^{1-exponent}/(exponent-1).
SeriesTotal pmf_total_power(const std::function<double(long long)>& pmf,
                            double exponent, double tail_tol,
                            std::size_t cap = 1000000);

/// Quadrature report: integral of pdf over [lower, inf) against target 1.
OracleReport pdf_integral(const std::string& target,
                          const std::function<double(double)>& pdf,
                          double lower, double tol = 1e-8);

/// Oracle moment of a continuous density: int stat(y) pdf(y) dy over
/// [lower, inf).
double moment_continuous(const std::function<double(double)>& pdf,
                         const std::function<double(double)>& stat,
                         double lower, double tol = 1e-10);

/// Oracle moment of a discrete density with a certified-tail strategy
/// supplied by the caller through one of the pmf_total mechanisms: here the
/// plain capped sum, adequate when the caller checks total mass separately.
double moment_discrete(const std::function<double(long long)>& pmf,
                       const std::function<double(long long)>& stat,
                       std::size_t cap = 1000000);

/// Monte-Carlo sample moment of draw(rng) over n_draws (n_draws >= 1000),
/// with standard error. check() passes iff |closed - mean| <= 3 stderr.
struct McMoment {
    double mean{0.0};
    double std_error{0.0};
    std::size_t n{0};
};

McMoment mc_moment(const std::function<double(Philox4x32&)>& draw,
                   std::size_t n_draws, std::uint64_t seed);

OracleReport mc_check(const std::string& target, double closed,
                      const McMoment& mc);

}  // namespace dglm::oracle
