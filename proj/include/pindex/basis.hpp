#pragma once

// Bernstein and Bernstein-S basis polynomials, their envelope, and sampled
// curves for plotting. Every function here is pure and thread-safe.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "pindex/error.hpp"

namespace pindex {

/// Degree at and above which basis values are evaluated in log space.
inline constexpr unsigned log_space_threshold = 500;

namespace detail {

inline void check_index(unsigned degree, int alpha) {
    if (alpha < 0 || static_cast<unsigned>(alpha) > degree) {
        throw domain_error("basis index " + std::to_string(alpha) + " outside [0, " +
                           std::to_string(degree) + "]");
    }
}

/// C(n, k) by the multiplicative recurrence; exact for every n below the
/// log-space threshold that fits a double mantissa, and correctly scaled
/// beyond.
inline double binomial_direct(unsigned n, unsigned k) {
    k = std::min(k, n - k);
    double c = 1.0;
    for (unsigned i = 1; i <= k; ++i) {
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return c;
}

inline double log_binomial(unsigned n, unsigned k) {
    using boost::math::lgamma;
    return lgamma(static_cast<double>(n) + 1.0) - lgamma(static_cast<double>(k) + 1.0) -
           lgamma(static_cast<double>(n - k) + 1.0);
}

} // namespace detail

/// Bernstein basis polynomial C(j, alpha) x^alpha (1-x)^(j-alpha) on [0, 1].
///
/// 0^0 is taken as 1, so x = 0 and x = 1 yield the degenerate partitions
/// [1, 0, ..., 0] and [0, ..., 0, 1] exactly. Degrees of at least
/// `log_space_threshold` are evaluated through log-gamma to avoid overflow of
/// the binomial coefficient and underflow of the powers.
inline double bernstein(unsigned j, int alpha, double x) {
    detail::check_index(j, alpha);
    if (!(x >= 0.0 && x <= 1.0)) {
        throw domain_error("bernstein abscissa " + std::to_string(x) + " outside [0, 1]");
    }
    const auto a = static_cast<unsigned>(alpha);
    const unsigned b = j - a;
    if (x == 0.0) return a == 0 ? 1.0 : 0.0;
    if (x == 1.0) return b == 0 ? 1.0 : 0.0;

    if (j < log_space_threshold) {
        return detail::binomial_direct(j, a) * std::pow(x, a) * std::pow(1.0 - x, b);
    }
    const double log_value =
        detail::log_binomial(j, a) + a * std::log(x) + b * std::log1p(-x);
    return std::min(1.0, std::exp(log_value));
}

/// Bernstein-S basis polynomial (1/s^j) C(j, alpha) x^alpha (s-x)^(j-alpha)
/// on [0, s]. Evaluated through the unit abscissa x/s, so s = 1 reproduces
/// `bernstein` bit for bit.
inline double bernstein_s(unsigned j, int alpha, double x, double s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw domain_error("stretching parameter s must be positive and finite, got " +
                           std::to_string(s));
    }
    detail::check_index(j, alpha);
    if (!(x >= 0.0 && x <= s)) {
        throw domain_error("bernstein_s abscissa " + std::to_string(x) + " outside [0, " +
                           std::to_string(s) + "]");
    }
    return bernstein(j, alpha, x / s);
}

/// All j+1 basis values at x, in ascending alpha order.
inline std::vector<double> basis_values(unsigned j, double x, double s = 1.0) {
    std::vector<double> out(static_cast<std::size_t>(j) + 1);
    for (unsigned a = 0; a <= j; ++a) out[a] = bernstein_s(j, static_cast<int>(a), x, s);
    return out;
}

/// Envelope 1/sqrt(2 pi j chi (1-chi)) through the local maxima of the degree-j
/// basis, with chi = x/s. Diagnostic only.
inline double envelope(unsigned j, double x, double s = 1.0) {
    if (j == 0) throw domain_error("envelope requires degree >= 1");
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw domain_error("stretching parameter s must be positive and finite, got " +
                           std::to_string(s));
    }
    const double chi = x / s;
    if (!(chi > 0.0 && chi < 1.0)) {
        throw domain_error("envelope is singular outside the open interval (0, s); x = " +
                           std::to_string(x));
    }
    return 1.0 / std::sqrt(2.0 * std::numbers::pi * j * chi * (1.0 - chi));
}

/// One sampled abscissa of a basis curve set.
struct CurveSample {
    double x;
    std::vector<double> values;       ///< indexed by alpha
    std::optional<double> envelope;   ///< absent at the two boundary abscissas
};

/// Sampled basis polynomials of one degree over [0, s].
struct BasisCurve {
    unsigned degree;
    double s;
    bool has_envelope;
    std::vector<CurveSample> samples;
};

/// Uniform grid of `n_samples` abscissas over [0, s] inclusive.
inline BasisCurve sample_curves(unsigned j, double s, std::size_t n_samples,
                                bool include_envelope) {
    if (n_samples < 2) throw validation_error("sample count must be at least 2");
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw domain_error("stretching parameter s must be positive and finite");
    }
    BasisCurve curve{j, s, include_envelope && j >= 1, {}};
    curve.samples.reserve(n_samples);
    const double last = static_cast<double>(n_samples - 1);
    for (std::size_t i = 0; i < n_samples; ++i) {
        // Endpoints are pinned so rounding never leaves the domain.
        const double x = i + 1 == n_samples ? s : s * (static_cast<double>(i) / last);
        CurveSample sample{x, basis_values(j, x, s), std::nullopt};
        if (curve.has_envelope && i != 0 && i + 1 != n_samples) {
            sample.envelope = envelope(j, x, s);
        }
        curve.samples.push_back(std::move(sample));
    }
    return curve;
}

} // namespace pindex
