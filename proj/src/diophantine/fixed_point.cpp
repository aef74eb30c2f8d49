#include "smoothdist/diophantine.hpp"
#include "smoothdist/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace smoothdist {

namespace {

constexpr unsigned kGuardBits = 8;

BigInt pow2(unsigned bits)
{
    BigInt v = 1;
    v <<= bits;
    return v;
}

// round(a / b) for b > 0, ties upward
BigInt round_div(const BigInt& a, const BigInt& b)
{
    BigInt q;
    BigInt num = 2 * a + b;
    BigInt den = 2 * b;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

BigInt from_u64(std::uint64_t v)
{
    BigInt b;
    mpz_set_ui(b.get_mpz_t(), v);
    return b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b)
{
    const unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
    if (r > std::numeric_limits<std::uint64_t>::max()) {
        throw PrecisionError("fixed point: error bound overflows 64 bits");
    }
    return static_cast<std::uint64_t>(r);
}

unsigned __int128 low128(const BigInt& v)
{
    // v in [0, 2^128)
    BigInt hi = v >> 64;
    BigInt lo = v - (hi << 64);
    return (static_cast<unsigned __int128>(hi.get_ui()) << 64) | lo.get_ui();
}

long double scaled(const BigInt& mantissa, unsigned frac_bits)
{
    long exp = 0;
    const double d = mpz_get_d_2exp(&exp, mantissa.get_mpz_t());
    return std::ldexp(static_cast<long double>(d), static_cast<int>(exp - static_cast<long>(frac_bits)));
}

} // namespace

FixedPointReal FixedPointReal::with_frac_bits(unsigned bits) const
{
    FixedPointReal out;
    out.frac_bits = bits;
    if (bits >= frac_bits) {
        const unsigned shift = bits - frac_bits;
        out.mantissa = mantissa << shift;
        if (err_ulp != 0 && shift >= 64) {
            throw PrecisionError("fixed point: widening overflows the error bound");
        }
        out.err_ulp = shift == 0 ? err_ulp : checked_mul(err_ulp, std::uint64_t{1} << shift);
        return out;
    }
    const unsigned shift = frac_bits - bits;
    mpz_fdiv_q_2exp(out.mantissa.get_mpz_t(), mantissa.get_mpz_t(), shift);
    const std::uint64_t scaled_err = shift >= 64 ? (err_ulp != 0 ? 1 : 0)
                                                 : (err_ulp + (std::uint64_t{1} << shift) - 1) >> shift;
    out.err_ulp = scaled_err + 1;
    return out;
}

FixedPointReal FixedPointReal::frac() const
{
    FixedPointReal out = *this;
    mpz_fdiv_r_2exp(out.mantissa.get_mpz_t(), mantissa.get_mpz_t(), frac_bits);
    return out;
}

FixedPointReal FixedPointReal::operator+(const FixedPointReal& other) const
{
    const unsigned bits = std::max(frac_bits, other.frac_bits);
    const FixedPointReal a = with_frac_bits(bits);
    const FixedPointReal b = other.with_frac_bits(bits);
    FixedPointReal out;
    out.frac_bits = bits;
    out.mantissa = a.mantissa + b.mantissa;
    out.err_ulp = a.err_ulp + b.err_ulp;
    return out;
}

FixedPointReal FixedPointReal::operator*(std::uint64_t n) const
{
    FixedPointReal out;
    out.frac_bits = frac_bits;
    out.mantissa = mantissa * from_u64(n);
    out.err_ulp = checked_mul(err_ulp, n);
    return out;
}

long double FixedPointReal::to_long_double() const
{
    return scaled(mantissa, frac_bits);
}

long double FixedPointReal::uncertainty() const
{
    return std::ldexp(static_cast<long double>(err_ulp), -static_cast<int>(frac_bits));
}

FixedPointReal fixed_point_value(const QuadraticSurd& surd, unsigned frac_bits)
{
    if (frac_bits < 1) {
        throw PreconditionError("fixed_point_value: frac_bits must be >= 1");
    }
    const unsigned work = frac_bits + kGuardBits;
    // s = floor(sqrt(D) 2^work); the true numerator lies in [P 2^work + s, P 2^work + s + 1)
    BigInt radicand = BigInt(static_cast<long>(surd.d())) << (2 * work);
    BigInt s;
    mpz_sqrt(s.get_mpz_t(), radicand.get_mpz_t());
    const BigInt n_lo = (BigInt(static_cast<long>(surd.p())) << work) + s;
    const BigInt n_hi = n_lo + 1;
    const BigInt q(static_cast<long>(surd.q()));

    BigInt lo, hi;
    if (q > 0) {
        mpz_fdiv_q(lo.get_mpz_t(), n_lo.get_mpz_t(), q.get_mpz_t());
        mpz_cdiv_q(hi.get_mpz_t(), n_hi.get_mpz_t(), q.get_mpz_t());
    } else {
        mpz_fdiv_q(lo.get_mpz_t(), n_hi.get_mpz_t(), q.get_mpz_t());
        mpz_cdiv_q(hi.get_mpz_t(), n_lo.get_mpz_t(), q.get_mpz_t());
    }
    // value * 2^work in [lo, hi] with hi - lo <= 3; round the midpoint
    FixedPointReal out;
    out.frac_bits = frac_bits;
    out.mantissa = round_div(lo + hi, pow2(kGuardBits + 1));
    out.err_ulp = 1;
    return out;
}

FixedPointReal fixed_point_value(const Rational& value, unsigned frac_bits)
{
    if (frac_bits < 1) {
        throw PreconditionError("fixed_point_value: frac_bits must be >= 1");
    }
    const BigInt scaled_num = value.num << frac_bits;
    FixedPointReal out;
    out.frac_bits = frac_bits;
    if (mpz_divisible_p(scaled_num.get_mpz_t(), value.den.get_mpz_t()) != 0) {
        out.mantissa = scaled_num / value.den;
        out.err_ulp = 0;
    } else {
        out.mantissa = round_div(scaled_num, value.den);
        out.err_ulp = 1;
    }
    return out;
}

FixedPointReal fixed_point_value(const RealLiteral& value, unsigned frac_bits)
{
    return std::visit([frac_bits](const auto& v) { return fixed_point_value(v, frac_bits); }, value);
}

BigInt DistanceInterval::lower() const
{
    BigInt lo = distance - err_ulp;
    return lo < 0 ? BigInt(0) : lo;
}

BigInt DistanceInterval::upper() const
{
    BigInt hi = distance + err_ulp;
    const BigInt half = pow2(frac_bits - 1);
    return hi > half ? half : hi;
}

long double DistanceInterval::distance_value() const
{
    return scaled(distance, frac_bits);
}

long double DistanceInterval::uncertainty() const
{
    return scaled(err_ulp, frac_bits);
}

DistanceInterval nearest_distance(const FixedPointReal& alpha, std::uint64_t n,
                                  const FixedPointReal& beta, unsigned min_certified_bits)
{
    const unsigned bits = std::max(alpha.frac_bits, beta.frac_bits);
    const FixedPointReal a = alpha.with_frac_bits(bits);
    const FixedPointReal b = beta.with_frac_bits(bits);

    DistanceInterval out;
    out.frac_bits = bits;
    BigInt v = a.mantissa * from_u64(n) + b.mantissa;
    mpz_fdiv_r_2exp(v.get_mpz_t(), v.get_mpz_t(), bits);
    const BigInt one = pow2(bits);
    const BigInt other = one - v;
    out.distance = v < other ? v : other;
    out.err_ulp = from_u64(a.err_ulp) * from_u64(n) + from_u64(b.err_ulp) + 1;

    const auto err_bits = static_cast<unsigned>(mpz_sizeinbase(out.err_ulp.get_mpz_t(), 2));
    if (bits < err_bits + min_certified_bits) {
        throw PrecisionError("nearest_distance: " + std::to_string(bits) + " fractional bits leave fewer than "
                             + std::to_string(min_certified_bits) + " certified bits at n = "
                             + std::to_string(n));
    }
    return out;
}

ChiOutcome chi_indicator(const DistanceInterval& interval, double delta)
{
    if (!(delta > 0.0)) {
        return ChiOutcome::out;
    }
    mpq_class d(delta); // exact binary value
    const mpq_class scale(pow2(interval.frac_bits), 1);
    const mpq_class hi(interval.upper(), 1);
    const mpq_class lo(interval.lower(), 1);
    if (hi < d * scale) {
        return ChiOutcome::in;
    }
    if (lo >= d * scale) {
        return ChiOutcome::out;
    }
    return ChiOutcome::boundary;
}

bool convergent_within_inverse_square(const QuadraticSurd& alpha, const Convergent& c)
{
    if (c.q < 1) {
        throw PreconditionError("convergent_within_inverse_square: q must be >= 1");
    }
    const auto qbits = static_cast<unsigned>(mpz_sizeinbase(c.q.get_mpz_t(), 2));
    for (unsigned extra = 64; extra <= 1024; extra *= 2) {
        const unsigned bits = 2 * qbits + extra;
        const FixedPointReal a = fixed_point_value(alpha, bits);
        // t = (alpha q - p) 2^bits, known within q * err ulps
        BigInt t = a.mantissa * c.q - (c.p << bits);
        t = abs(t);
        const BigInt err = c.q * from_u64(a.err_ulp);
        const BigInt one = pow2(bits);
        // |alpha q - p| < 1/q  <=>  |t| q < 2^bits
        if ((t + err) * c.q < one) {
            return true;
        }
        if (t >= err && (t - err) * c.q >= one) {
            return false;
        }
    }
    throw PrecisionError("convergent_within_inverse_square: undecided at 1024 guard bits");
}

PhaseClassifier::PhaseClassifier(const FixedPointReal& alpha, const FixedPointReal& beta, double delta)
    : delta_(delta)
{
    const FixedPointReal a = alpha.with_frac_bits(128).frac();
    const FixedPointReal b = beta.with_frac_bits(128).frac();
    alpha_ = low128(a.mantissa);
    beta_ = low128(b.mantissa);
    alpha_err_ = a.err_ulp;
    beta_err_ = b.err_ulp;

    if (!(delta > 0.0)) {
        delta_ceil_ = 0;
        return;
    }
    if (delta >= 1.0) {
        delta_covers_all_ = true;
        return;
    }
    const mpq_class scaled_delta = mpq_class(delta) * mpq_class(pow2(128), 1);
    BigInt ceil_value;
    mpz_cdiv_q(ceil_value.get_mpz_t(), scaled_delta.get_num_mpz_t(), scaled_delta.get_den_mpz_t());
    delta_ceil_ = low128(ceil_value);
}

ChiOutcome PhaseClassifier::classify(std::uint64_t n) const
{
    const unsigned __int128 v = alpha_ * n + beta_;
    const unsigned __int128 half = static_cast<unsigned __int128>(1) << 127;
    const unsigned __int128 dist = v <= half ? v : -v;
    const unsigned __int128 err = alpha_err_ * n + beta_err_ + 1;
    if (delta_covers_all_) {
        return ChiOutcome::in;
    }
    // for integer u: u < delta  <=>  u < ceil(delta),  u >= delta  <=>  u >= ceil(delta)
    const unsigned __int128 hi = dist + err;
    const unsigned __int128 lo = dist > err ? dist - err : 0;
    if (hi < delta_ceil_) {
        return ChiOutcome::in;
    }
    if (lo >= delta_ceil_) {
        return ChiOutcome::out;
    }
    return ChiOutcome::boundary;
}

double PhaseClassifier::phase(std::uint64_t n) const
{
    const unsigned __int128 v = alpha_ * n + beta_;
    return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(v >> 75)), -53);
}

double PhaseClassifier::alpha_phase(std::uint64_t k) const
{
    const unsigned __int128 v = alpha_ * k;
    return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(v >> 75)), -53);
}

} // namespace smoothdist
