#pragma once

// Exact continued fractions of quadratic irrationals, convergent
// denominators, and certified fixed-point evaluation of ||alpha n + beta||.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace smoothdist {

using BigInt = mpz_class;

// (P + sqrt(D)) / Q with D > 0 not a perfect square and Q | D - P^2.
class QuadraticSurd {
public:
    // Normalizes when Q does not divide D - P^2 by scaling
    // (P, D, Q) -> (P|Q|, D Q^2, Q|Q|). Throws PreconditionError for a
    // square D (rational input) or Q = 0.
    static QuadraticSurd make(std::int64_t p, std::int64_t d, std::int64_t q);
    static QuadraticSurd sqrt(std::int64_t d) { return make(0, d, 1); }

    std::int64_t p() const { return p_; }
    std::int64_t d() const { return d_; }
    std::int64_t q() const { return q_; }

    long double approx() const;
    std::string to_string() const;

    bool operator==(const QuadraticSurd&) const = default;

private:
    QuadraticSurd(std::int64_t p, std::int64_t d, std::int64_t q) : p_(p), d_(d), q_(q) {}

    std::int64_t p_;
    std::int64_t d_;
    std::int64_t q_;
};

struct Rational {
    BigInt num;
    BigInt den{1}; // > 0

    static Rational make(BigInt num, BigInt den);
    long double approx() const;
    bool is_dyadic() const;
    std::string to_string() const;
};

using RealLiteral = std::variant<Rational, QuadraticSurd>;

// Accepts "(P+sqrt(D))/Q", "(P-sqrt(D))/Q", "sqrt(D)", "p/q", integers,
// and hexadecimal dyadics "0xHH.HH". Throws ConfigError.
RealLiteral parse_literal(std::string_view text);
std::string to_string(const RealLiteral& value);
long double approx(const RealLiteral& value);

class ContinuedFraction {
public:
    ContinuedFraction(std::int64_t a0, std::vector<std::int64_t> preperiod,
                      std::vector<std::int64_t> period);

    std::int64_t a0() const { return a0_; }
    const std::vector<std::int64_t>& preperiod() const { return preperiod_; }
    const std::vector<std::int64_t>& period() const { return period_; }

    // a_j for any j >= 0, following the period indefinitely.
    std::int64_t partial_quotient(std::size_t j) const;

private:
    std::int64_t a0_;
    std::vector<std::int64_t> preperiod_;
    std::vector<std::int64_t> period_;
};

// PQa iteration with exact integers. The period is detected when a
// (P_i, Q_i) state with i >= 1 repeats. Throws PreconditionError if no
// repetition occurs within max_terms partial quotients.
ContinuedFraction cf_expand(const QuadraticSurd& surd, std::size_t max_terms = 100'000);

// max a_j over j >= 1 (the integer part a_0 is excluded): the least A
// with alpha mod 1 in I(A).
std::int64_t max_partial_quotient(const ContinuedFraction& cf);

struct Convergent {
    std::size_t s = 0;
    BigInt p;
    BigInt q;
};

std::vector<Convergent> convergents(const ContinuedFraction& cf, std::size_t count);

// Least s with q_s^3 >= x^2, i.e. q_s >= x^(2/3), compared exactly.
Convergent select_denominator(std::uint64_t x, const ContinuedFraction& cf);

// floor(q^(3/2)) = isqrt(q^3).
BigInt x_from_q(const BigInt& q);
std::uint64_t x_from_q(std::uint64_t q);

// mantissa * 2^-frac_bits, exact value within err_ulp * 2^-frac_bits.
struct FixedPointReal {
    BigInt mantissa;
    unsigned frac_bits = 0;
    std::uint64_t err_ulp = 0;

    // Same value at a different precision; widening is exact, narrowing
    // floors and adds one ulp of error.
    FixedPointReal with_frac_bits(unsigned bits) const;
    // Fractional part, mantissa reduced into [0, 2^frac_bits).
    FixedPointReal frac() const;
    FixedPointReal operator+(const FixedPointReal& other) const;
    FixedPointReal operator*(std::uint64_t n) const;

    long double to_long_double() const;
    long double uncertainty() const;
};

FixedPointReal fixed_point_value(const QuadraticSurd& surd, unsigned frac_bits);
FixedPointReal fixed_point_value(const Rational& value, unsigned frac_bits);
FixedPointReal fixed_point_value(const RealLiteral& value, unsigned frac_bits);

// Certified enclosure [distance - err, distance + err] of ||t|| in units
// of 2^-frac_bits, clamped to [0, 1/2].
struct DistanceInterval {
    BigInt distance;
    BigInt err_ulp;
    unsigned frac_bits = 0;

    BigInt lower() const;
    BigInt upper() const;
    long double distance_value() const;
    long double uncertainty() const;
};

// ||alpha n + beta|| with error n * err(alpha) + err(beta) + 1 ulp.
// Throws PrecisionError if fewer than min_certified_bits bits survive.
DistanceInterval nearest_distance(const FixedPointReal& alpha, std::uint64_t n,
                                  const FixedPointReal& beta, unsigned min_certified_bits = 32);

enum class ChiOutcome { in, out, boundary };

// `in` if the whole interval lies below delta, `out` if it lies at or
// above delta, `boundary` otherwise. delta is taken as the exact binary
// value of the double.
ChiOutcome chi_indicator(const DistanceInterval& interval, double delta);

// |alpha - p/q| < 1/q^2, decided in certified fixed point with enough bits
// for q. Throws PrecisionError if the enclosure cannot decide.
bool convergent_within_inverse_square(const QuadraticSurd& alpha, const Convergent& c);

// Hot-path classifier at exactly 128 fractional bits: alpha and beta are
// reduced mod 1 into unsigned 128-bit mantissas, so alpha * n + beta mod 1
// is a wrapping multiply-add. Agrees with nearest_distance + chi_indicator.
class PhaseClassifier {
public:
    PhaseClassifier(const FixedPointReal& alpha, const FixedPointReal& beta, double delta);

    ChiOutcome classify(std::uint64_t n) const;
    // {alpha n + beta} as a double in [0, 1).
    double phase(std::uint64_t n) const;
    // {alpha k} for the homogeneous part only.
    double alpha_phase(std::uint64_t k) const;

    double delta() const { return delta_; }

private:
    unsigned __int128 alpha_ = 0;
    unsigned __int128 beta_ = 0;
    unsigned __int128 alpha_err_ = 0;
    unsigned __int128 beta_err_ = 0;
    unsigned __int128 delta_ceil_ = 0;
    bool delta_covers_all_ = false;
    double delta_ = 0;
};

} // namespace smoothdist
