#include "rfp/rates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rfp {

namespace {

// x^t log2 x with the continuity convention at x = 0
double power_log_term(double x, std::size_t t) {
    if (x <= 0.0)
        return 0.0;
    return std::pow(x, static_cast<double>(t)) * std::log2(x);
}

// a log2(a / b), 0 log 0 = 0
double relative_term(double a, double b) {
    if (a == 0.0)
        return 0.0;
    if (b == 0.0)
        return std::numeric_limits<double>::infinity();
    return a * std::log2(a / b);
}

} // namespace

double rate_bound(double p, std::size_t t) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("bias p must lie in [0, 1]");
    if (t < 1)
        throw std::invalid_argument("coalition size t must be at least 1");
    return -power_log_term(p, t) - power_log_term(1.0 - p, t);
}

RateResult optimal_rate(std::size_t t) {
    if (t < 1)
        throw std::invalid_argument("coalition size t must be at least 1");
    constexpr int kGrid = 1000;
    int best = 0;
    double best_rate = -1.0;
    for (int i = 0; i <= kGrid; ++i) {
        const double r = rate_bound(static_cast<double>(i) / kGrid, t);
        if (r > best_rate) {
            best_rate = r;
            best = i;
        }
    }
    const double grid_p = static_cast<double>(best) / kGrid;

    double lo = std::max(0.0, grid_p - 1.0 / kGrid);
    double hi = std::min(1.0, grid_p + 1.0 / kGrid);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = rate_bound(x1, t);
    double f2 = rate_bound(x2, t);
    while (hi - lo > 1e-7) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = rate_bound(x2, t);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = rate_bound(x1, t);
        }
    }
    const double refined_p = 0.5 * (lo + hi);
    const double refined_rate = rate_bound(refined_p, t);

    RateResult result{t, grid_p, best_rate};
    if (refined_rate > best_rate) {
        result.p_star = refined_p;
        result.rate = refined_rate;
    }
    return result;
}

std::optional<ReferenceRates> reference_rates(std::size_t t) {
    switch (t) {
    case 2: return ReferenceRates{0.2075, 0.25};
    case 3: return ReferenceRates{0.0693, 0.0833};
    case 4: return ReferenceRates{0.04, 0.0158};
    case 5: return ReferenceRates{0.026, 0.0006};
    default: return std::nullopt;
    }
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("entropy argument must lie in [0, 1]");
    return -power_log_term(p, 1) - power_log_term(1.0 - p, 1);
}

double divergence(double a, double b) {
    if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0))
        throw std::invalid_argument("divergence arguments must lie in [0, 1]");
    return relative_term(a, b) + relative_term(1.0 - a, 1.0 - b);
}

double concat_error_bound(std::size_t outer_length, double xi, double eps) {
    if (!(eps > 0.0 && eps < xi && xi < 1.0))
        throw std::invalid_argument("concatenated bound requires 0 < eps < xi < 1 (inner error below the slack); got eps=" +
                                    std::to_string(eps) + ", xi=" + std::to_string(xi));
    if (outer_length == 0)
        return 1.0;
    return std::exp2(-static_cast<double>(outer_length) * divergence(xi, eps));
}

std::size_t default_inner_length(std::size_t outer_length, double factor) {
    if (outer_length < 2)
        return 1;
    return static_cast<std::size_t>(std::ceil(factor * std::log2(static_cast<double>(outer_length)) - 1e-9));
}

bool concat_distance_condition(std::size_t outer_length, std::size_t outer_dimension, std::size_t t, double xi) {
    if (outer_dimension == 0 || outer_dimension > outer_length || t == 0)
        return false;
    const double distance = static_cast<double>(outer_length - outer_dimension + 1);
    return distance * static_cast<double>(t) >=
           static_cast<double>(outer_length) * (static_cast<double>(t) - 1.0 + xi) - 1e-9;
}

ConcatDesign concat_design(std::size_t t, std::size_t q, double xi, std::optional<std::size_t> inner_length) {
    if (t < 2)
        throw std::invalid_argument("concatenated design needs t >= 2");
    if (q < 4 || (q & (q - 1)) != 0 || q > 256)
        throw std::invalid_argument("outer alphabet q must be a power of two in [4, 256]");
    if (!(xi > 0.0 && xi < 1.0))
        throw std::invalid_argument("slack xi must lie in (0, 1)");

    ConcatDesign d;
    d.t = t;
    d.q = q;
    d.xi = xi;
    d.outer_length = q - 1;
    const double k_real = static_cast<double>(d.outer_length) * (1.0 - xi) / static_cast<double>(t);
    d.outer_dimension = static_cast<std::size_t>(std::floor(k_real + 1e-9));
    if (d.outer_dimension < 1)
        throw std::invalid_argument("parameters too small: K = floor(N (1 - xi) / t) = 0 for N=" +
                                    std::to_string(d.outer_length) + ", t=" + std::to_string(t));
    d.outer_distance = d.outer_length - d.outer_dimension + 1;
    d.relative_distance = static_cast<double>(d.outer_distance) / static_cast<double>(d.outer_length);
    d.required_relative_distance = 1.0 - (1.0 - xi) / static_cast<double>(t);
    d.distance_condition = concat_distance_condition(d.outer_length, d.outer_dimension, t, xi);
    if (!d.distance_condition)
        throw std::invalid_argument("outer code violates the relative distance condition");
    d.outer_rate = static_cast<double>(d.outer_dimension) / static_cast<double>(d.outer_length);
    d.inner_length = inner_length.value_or(default_inner_length(d.outer_length));
    if (d.inner_length == 0)
        throw std::invalid_argument("inner length must be positive");
    const RateResult best = optimal_rate(t);
    d.inner_bias = best.p_star;
    d.concatenated_rate = static_cast<double>(d.outer_dimension) * std::log2(static_cast<double>(q)) /
                          static_cast<double>(d.outer_length * d.inner_length);
    d.asymptotic_rate = best.rate / static_cast<double>(t);
    return d;
}

} // namespace rfp
