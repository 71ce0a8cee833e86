#pragma once

#include <cstddef>
#include <optional>

namespace rfp {

/// -p^t log2 p - (1-p)^t log2(1-p), with 0 log 0 = 0. The achievable rate of
/// the i.i.d. Bernoulli(p) ensemble against coalitions of size t.
double rate_bound(double p, std::size_t t);

struct RateResult {
    std::size_t t = 0;
    double p_star = 0.0;
    double rate = 0.0;
};

/// Maximizes rate_bound over p: a 10^-3 grid followed by golden-section
/// refinement to |dp| <= 10^-6 around the best grid point. The grid point is
/// kept unless refinement strictly improves on it.
RateResult optimal_rate(std::size_t t);

/// Known rates of deterministic frameproof codes and fingerprinting codes
/// for t = 2..5, for side-by-side comparison only.
struct ReferenceRates {
    double deterministic_frameproof = 0.0;
    double fingerprinting = 0.0;
};
std::optional<ReferenceRates> reference_rates(std::size_t t);

double binary_entropy(double p);

/// D(a || b) in bits. Returns +infinity when b is 0 or 1 and a != b.
double divergence(double a, double b);

/// 2^(-N D(xi || eps)); requires 0 < eps < xi < 1.
double concat_error_bound(std::size_t outer_length, double xi, double eps);

/// Parameter choice for the RS-concatenated construction.
struct ConcatDesign {
    std::size_t t = 0;
    std::size_t q = 0;
    double xi = 0.0;
    std::size_t outer_length = 0;    // N = q - 1
    std::size_t outer_dimension = 0; // K = floor(N (1 - xi) / t)
    std::size_t outer_distance = 0;  // N - K + 1
    double relative_distance = 0.0;
    double required_relative_distance = 0.0; // 1 - (1 - xi) / t
    bool distance_condition = false;
    double outer_rate = 0.0; // K / N
    std::size_t inner_length = 0;
    double inner_bias = 0.0;
    double concatenated_rate = 0.0; // K log2 q / (N m)
    double asymptotic_rate = 0.0;   // R_t / t
};

/// Default inner length ceil(c log2 N) with c = 4.
std::size_t default_inner_length(std::size_t outer_length, double factor = 4.0);

/// Relative distance test Delta / N >= 1 - (1 - xi) / t, evaluated as
/// Delta t >= N (t - 1 + xi) up to rounding.
bool concat_distance_condition(std::size_t outer_length, std::size_t outer_dimension, std::size_t t, double xi);

/// Throws std::invalid_argument when K < 1 or the distance condition fails.
ConcatDesign concat_design(std::size_t t, std::size_t q, double xi,
                           std::optional<std::size_t> inner_length = std::nullopt);

} // namespace rfp
