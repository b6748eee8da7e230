#ifndef INTERAX_SIGNIFICANCE_HPP
#define INTERAX_SIGNIFICANCE_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "dataset.hpp"
#include "info.hpp"
#include "prob.hpp"

namespace interax {

struct significance_result {
    double g = 0.0;
    std::uint64_t df = 0;
    double p = 1.0;
};

namespace detail {

// lower regularized incomplete gamma P(a,x) by power series; use when x < a+1
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// upper regularized incomplete gamma Q(a,x) by modified Lentz continued
// fraction; use when x >= a+1 (guarantees the leading denominator > 0)
inline double gamma_q_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

inline double regularized_gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) {
        throw std::invalid_argument("regularized_gamma_q: a > 0 and x >= 0 required");
    }
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

// G = 2 N ln(2) I; the ln(2) converts bits to nats.  Only defined for the
// nonnegative measures (MI, CMI, total correlation), not for signed
// interaction information, whose null is not chi-square.
inline double g_statistic(double measure_bits, std::uint64_t n) {
    if (measure_bits < 0.0) {
        throw std::invalid_argument("g_statistic: measure must be nonnegative");
    }
    if (n < 1) {
        throw std::invalid_argument("g_statistic: n must be at least 1");
    }
    return 2.0 * static_cast<double>(n) * std::log(2.0) * measure_bits;
}

inline double chi2_pvalue(double g, std::uint64_t df) {
    if (df == 0) {
        throw std::invalid_argument("chi2_pvalue: df must be positive");
    }
    if (g < 0.0) {
        throw std::invalid_argument("chi2_pvalue: g must be nonnegative");
    }
    return regularized_gamma_q(static_cast<double>(df) / 2.0, g / 2.0);
}

// G-test of I(A;B|Z) against chi-square with the log-linear df
// (|A|-1)(|B|-1)*prod|Z|.  Always ML-estimated: the test statistic is a
// function of observed counts, whatever estimator the session uses for
// reporting.  nullopt when A or B is single-valued (df 0, untestable).
inline std::optional<significance_result> test_dependence(const dataset& ds,
                                                          std::uint32_t a, std::uint32_t b,
                                                          const attr_set& z = {}) {
    const std::uint64_t ca = ds.cardinality(a);
    const std::uint64_t cb = ds.cardinality(b);
    if (ca < 2 || cb < 2) return std::nullopt;
    std::uint64_t df = (ca - 1) * (cb - 1);
    for (std::uint32_t zi : z) df *= ds.cardinality(zi);
    significance_result r;
    r.g = g_statistic(
        conditional_mutual_information(ds, estimator::ml(), attr_set{a}, attr_set{b}, z),
        ds.n_rows());
    r.df = df;
    r.p = chi2_pvalue(r.g, df);
    return r;
}

}  // namespace interax

#endif
