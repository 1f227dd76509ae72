#pragma once

// Gaussian tail functions used by the energy-detector formulas.

#include <cmath>
#include <numbers>
#include <string>

#include "cogmac/error.hpp"

namespace cogmac {

/// A probability value, checked to lie in [0, 1] on construction.
class Probability {
  public:
    constexpr Probability() = default;

    explicit Probability(double value) : value_(value)
    {
        if (!(value >= 0.0 && value <= 1.0)) {
            throw domain_error("probability out of [0,1]: " + std::to_string(value));
        }
    }

    constexpr double value() const noexcept { return value_; }
    constexpr operator double() const noexcept { return value_; }

    constexpr Probability complement() const noexcept { return from_unchecked(1.0 - value_); }

    /// For values produced by formulas that are in [0,1] by construction.
    static constexpr Probability from_unchecked(double value) noexcept
    {
        Probability p;
        p.value_ = value;
        return p;
    }

    friend constexpr bool operator==(Probability, Probability) = default;

  private:
    double value_ = 0.0;
};

namespace detail {

inline double normal_pdf(double x)
{
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Acklam's rational approximation of the standard normal quantile, |rel err| < 1.2e-9.
inline double acklam_quantile(double p)
{
    constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                            1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                            6.680131188771972e+01,  -1.328068155288572e+01};
    constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                            -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                            3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace detail

/// Upper tail of the standard normal, Q(x) = P(Z > x).
inline Probability q_function(double x)
{
    if (!std::isfinite(x)) {
        throw domain_error("q_function: non-finite argument");
    }
    return Probability::from_unchecked(0.5 * std::erfc(x / std::numbers::sqrt2));
}

/// Inverse of q_function on (0, 1).
///
/// Starts from a rational quantile approximation and applies two Newton
/// steps against q_function, so q_function(q_inverse(p)) reproduces p to
/// about machine precision regardless of the starting approximation.
inline double q_inverse(double p)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw domain_error("q_inverse: argument must lie in (0,1), got " + std::to_string(p));
    }
    if (p == 0.5) {
        return 0.0;
    }
    // Q^{-1}(p) = Phi^{-1}(1 - p); feed the lower tail directly to keep precision.
    double x = -detail::acklam_quantile(p);
    for (int step = 0; step < 2; ++step) {
        const double pdf = detail::normal_pdf(x);
        if (pdf <= 0.0) {
            break;
        }
        x += (q_function(x).value() - p) / pdf;
    }
    return x;
}

} // namespace cogmac
