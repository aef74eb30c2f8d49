#pragma once

// Direct evaluation of the Type I / Type II exponential sums
//
//   Type I : sum_{l<=L} c_l sum_{mn<=x, M<=m<2M} a_m     e(alpha l m n)
//   Type II: sum_{l<=L} c_l sum_{mn<=x, M<=m<2M} a_m b_n e(alpha l m n)
//
// with c_l taken from one side of a SandwichPair, the predictors that
// bound them, and a quadrature check of the truncated Perron integral.

#include "smoothdist/diophantine.hpp"
#include "smoothdist/fourier.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace smoothdist {

enum class CoefficientKind { unit, moebius, divisor_bounded, prime_indicator, custom };

// Arithmetic weights a_m with |a_m| <= tau(m).
class CoefficientClass {
public:
    static CoefficientClass unit() { return CoefficientClass(CoefficientKind::unit); }
    static CoefficientClass moebius() { return CoefficientClass(CoefficientKind::moebius); }
    // a_m = tau(m), the extreme admissible weight
    static CoefficientClass divisor_bounded() { return CoefficientClass(CoefficientKind::divisor_bounded); }
    static CoefficientClass prime_indicator() { return CoefficientClass(CoefficientKind::prime_indicator); }
    // values[m] for m >= 1 (values[0] ignored); zero beyond the table.
    // Throws PreconditionError if some |values[m]| > tau(m).
    static CoefficientClass custom(std::vector<double> values);

    CoefficientKind kind() const { return kind_; }
    std::string name() const;

    // a_m for m = 0..limit (index 0 is 0).
    std::vector<double> table(std::uint64_t limit) const;

private:
    explicit CoefficientClass(CoefficientKind kind) : kind_(kind) {}

    CoefficientKind kind_;
    std::vector<double> custom_;
};

CoefficientClass parse_coefficient_class(const std::string& name);

// Number of divisors of n >= 1.
std::uint64_t divisor_tau(std::uint64_t n);
// mu(m) and tau(m) for m = 0..limit via an spf table.
std::vector<int> moebius_table(std::uint64_t limit);
std::vector<std::uint32_t> tau_table(std::uint64_t limit);

// sum_{n=1}^{N} e(n theta), closed form with a Taylor fallback when
// ||theta|| < 1e-12.
std::complex<double> geometric_phase_sum(double theta, std::uint64_t n_terms);

struct SumLimits {
    // cap on the number of (l, m) pairs (Type I) or (l, m, n) triples (Type II)
    double max_work = 2e10;
    std::uint64_t type1_max_x = 1'000'000;
    std::uint64_t type2_max_x = 10'000;
};

// Parallel over l with a fixed block decomposition; the result does not
// depend on the thread count.
std::complex<double> type1_sum(const FixedPointReal& alpha, std::uint64_t x, std::uint64_t m_base,
                               const CoefficientClass& a, const SandwichPair& c, Side side,
                               const SumLimits& limits = {});

std::complex<double> type2_sum(const FixedPointReal& alpha, std::uint64_t x, std::uint64_t m_base,
                               const CoefficientClass& a, const CoefficientClass& b,
                               const SandwichPair& c, Side side, const SumLimits& limits = {});

// (M + x/q + delta q) (log x)^kappa
double type1_predictor(double x, double m_base, double q, double delta, double kappa);

enum class Type2Regime { low, high };

// low : x (delta/M + M/x + 1/q + q delta/x)^(1/2) (log x)^kappa, for M <~ x^(1/2)
// high: x (M delta/x + 1/M + 1/q + q delta/x)^(1/2) (log x)^kappa, for M >~ x^(1/2)
double type2_predictor(double x, double m_base, double q, double delta, Type2Regime regime,
                       double kappa);

// The regime matching M against sqrt(x).
Type2Regime natural_regime(double x, double m_base);

struct BoundReport {
    std::string kind;
    std::uint64_t x = 0;
    std::uint64_t m_base = 0;
    std::uint64_t q = 0;
    double delta = 0;
    std::size_t degree = 0;
    double kappa = 0;
    double lhs_abs = 0;
    double predictor = 0;
    double ratio = 0;
};

// (1/pi) int_{-T}^{T} e^{i gamma t} sin(rho t) / t dt, by Gauss-Kronrod
// quadrature of the even integrand over half-oscillation panels.
// Throws PreconditionError when ||gamma| - rho| < 1e-6.
double perron_indicator(double gamma, double rho, double t_max);

} // namespace smoothdist
