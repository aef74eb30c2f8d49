#include "oracles.hpp"

#include "smoothdist/diophantine.hpp"
#include "smoothdist/errors.hpp"

#include "doctest.h"

#include <random>

using namespace smoothdist;
using oracle::Float;

namespace {

const QuadraticSurd kSqrt2 = QuadraticSurd::sqrt(2);
const QuadraticSurd kGolden = QuadraticSurd::make(1, 5, 2);
const QuadraticSurd kSqrt7 = QuadraticSurd::sqrt(7);

Float exact(const QuadraticSurd& s)
{
    return oracle::surd(s.p(), s.d(), s.q());
}

Float big(const BigInt& v)
{
    return Float(v.get_str());
}

// value of a certified distance end point as a Float
Float scaled(const BigInt& v, unsigned bits)
{
    return ldexp(big(v), -static_cast<int>(bits));
}

} // namespace

TEST_SUITE("diophantine")
{
TEST_CASE("literal parsing")
{
    CHECK(std::get<QuadraticSurd>(parse_literal("sqrt(2)")) == kSqrt2);
    CHECK(std::get<QuadraticSurd>(parse_literal("(1+sqrt(5))/2")) == kGolden);
    const auto r = std::get<Rational>(parse_literal("1/3"));
    CHECK(r.num == 1);
    CHECK(r.den == 3);
    CHECK(std::get<Rational>(parse_literal("6/8")).den == 4);
    CHECK(std::get<Rational>(parse_literal("0x0.8")).den == 2);
    CHECK(std::get<Rational>(parse_literal("0")).num == 0);
    const auto minus = std::get<QuadraticSurd>(parse_literal("(3-sqrt(5))/2"));
    CHECK(static_cast<double>(minus.approx()) == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0));
    CHECK_THROWS_AS(parse_literal("sqrt(4)"), ConfigError);
    CHECK_THROWS_AS(parse_literal("pi"), ConfigError);
    CHECK_THROWS_AS(parse_literal("1/0"), ConfigError);
}

TEST_CASE("cf_expand examples")
{
    const auto s2 = cf_expand(kSqrt2);
    CHECK(s2.a0() == 1);
    CHECK(s2.period() == std::vector<std::int64_t>{2});
    const auto g = cf_expand(kGolden);
    CHECK(g.a0() == 1);
    CHECK(g.period() == std::vector<std::int64_t>{1});
    const auto s7 = cf_expand(kSqrt7);
    CHECK(s7.a0() == 2);
    CHECK(s7.period() == std::vector<std::int64_t>{1, 1, 1, 4});
    CHECK(max_partial_quotient(s2) == 2);
    CHECK(max_partial_quotient(g) == 1);
    CHECK(max_partial_quotient(s7) == 4);
    CHECK(s7.partial_quotient(4) == 4);
    CHECK(s7.partial_quotient(8) == 4);
    CHECK_THROWS_AS(QuadraticSurd::sqrt(9), PreconditionError);
}

TEST_CASE("partial quotients agree with a 512-bit floating expansion")
{
    for (const auto& s : {kSqrt2, kGolden, kSqrt7, QuadraticSurd::make(2, 13, 3), QuadraticSurd::make(-1, 31, 5)}) {
        const auto cf = cf_expand(s);
        Float v = exact(s);
        for (std::size_t j = 0; j < 40; ++j) {
            const Float a = floor(v);
            CAPTURE(s.to_string());
            CAPTURE(j);
            CHECK(cf.partial_quotient(j) == static_cast<std::int64_t>(a));
            v = 1 / (v - a);
        }
    }
}

TEST_CASE("convergents")
{
    const auto c = convergents(cf_expand(kSqrt2), 5);
    std::vector<long> qs;
    for (const auto& cv : c) {
        qs.push_back(cv.q.get_si());
    }
    CHECK(qs == std::vector<long>{1, 2, 5, 12, 29});

    const auto f = convergents(cf_expand(kGolden), 20);
    long a = 1, b = 1;
    for (std::size_t s = 0; s < f.size(); ++s) {
        CHECK(f[s].q == a);
        const long next = a + b;
        a = b;
        b = next;
    }
}

TEST_CASE("convergent invariants for 50 terms")
{
    for (const auto& s : {kSqrt2, kGolden, kSqrt7}) {
        const auto cf = cf_expand(s);
        const auto cs = convergents(cf, 50);
        const auto A = max_partial_quotient(cf);
        const Float alpha = exact(s);
        for (std::size_t k = 1; k < cs.size(); ++k) {
            const BigInt det = cs[k].p * cs[k - 1].q - cs[k - 1].p * cs[k].q;
            CHECK(det == ((k - 1) % 2 == 0 ? 1 : -1));
            CHECK(cs[k].q <= (A + 1) * cs[k - 1].q);
        }
        for (const auto& c : cs) {
            CHECK(convergent_within_inverse_square(s, c));
            const Float err = abs(alpha - big(c.p) / big(c.q));
            CHECK(err < 1 / (big(c.q) * big(c.q)));
        }
    }
    // a fraction that is not a convergent
    CHECK_FALSE(convergent_within_inverse_square(kSqrt2, Convergent{0, 3, 5}));
}

TEST_CASE("select_denominator")
{
    CHECK(select_denominator(10'000, cf_expand(kGolden)).q == 610);
    CHECK(select_denominator(10'000, cf_expand(kSqrt2)).q == 985);
    const auto two = select_denominator(2, cf_expand(kSqrt2));
    CHECK(two.q * two.q * two.q >= 4);
    CHECK(two.q == 2);
    CHECK_THROWS_AS(select_denominator(1, cf_expand(kSqrt2)), PreconditionError);

    const auto cf = cf_expand(kSqrt7);
    const auto cs = convergents(cf, 60);
    for (std::uint64_t x = 2; x < 2'000'000; x = x * 3 + 1) {
        const auto c = select_denominator(x, cf);
        const BigInt x2 = BigInt(static_cast<unsigned long>(x)) * BigInt(static_cast<unsigned long>(x));
        CHECK(c.q * c.q * c.q >= x2);
        if (c.s > 0) {
            const BigInt& prev = cs[c.s - 1].q;
            CHECK(prev * prev * prev < x2);
        }
        // q <= (A + 1) x^(2/3)
        CHECK(static_cast<double>(c.q.get_d()) <= 5.0 * std::pow(static_cast<double>(x), 2.0 / 3.0) + 1e-9);
    }
}

TEST_CASE("x_from_q")
{
    CHECK(x_from_q(std::uint64_t{4}) == 8);
    CHECK(x_from_q(std::uint64_t{1}) == 1);
    CHECK(x_from_q(std::uint64_t{985}) == 30913);
    const oracle::cpp_int q3 = oracle::cpp_int(985) * 985 * 985;
    CHECK(oracle::isqrt(q3) == 30913);
    for (std::uint64_t q : {2ull, 5741ull, 33461ull, 195025ull, 1'000'003ull}) {
        const oracle::cpp_int cube = oracle::cpp_int(q) * q * q;
        CHECK(x_from_q(q) == oracle::isqrt(cube));
    }
    CHECK_THROWS_AS(x_from_q(std::uint64_t{0}), PreconditionError);
}

TEST_CASE("fixed_point_value examples")
{
    const auto s = fixed_point_value(kSqrt2, 8);
    CHECK(s.mantissa == 362);
    CHECK(s.err_ulp <= 1);
    const auto q = fixed_point_value(Rational::make(3, 4), 40);
    CHECK(q.err_ulp == 0);
    CHECK(q.mantissa == BigInt(3) << 38);
    const auto third = fixed_point_value(Rational::make(1, 3), 8);
    CHECK(third.mantissa == 85);
    CHECK(third.err_ulp <= 1);
}

TEST_CASE("fixed_point_value encloses the true value")
{
    for (const auto& s : {kSqrt2, kGolden, kSqrt7, QuadraticSurd::make(-7, 1000003, -13)}) {
        for (unsigned bits : {16u, 64u, 128u, 300u}) {
            const auto v = fixed_point_value(s, bits);
            const Float diff = abs(scaled(v.mantissa, bits) - exact(s));
            CHECK(diff <= ldexp(Float(v.err_ulp), -static_cast<int>(bits)));
        }
    }
}

TEST_CASE("nearest_distance examples")
{
    const auto a = fixed_point_value(kSqrt2, 128);
    const auto zero = fixed_point_value(Rational::make(0, 1), 128);
    const auto d5 = nearest_distance(a, 5, zero);
    const Float truth = oracle::distance(exact(kSqrt2), 5, Float(0));
    CHECK(static_cast<double>(truth) == doctest::Approx(0.0710678118654752).epsilon(1e-14));
    CHECK(scaled(d5.lower(), 128) <= truth);
    CHECK(scaled(d5.upper(), 128) >= truth);
    CHECK(static_cast<double>(d5.distance_value()) == doctest::Approx(0.07106781186547524));

    CHECK(nearest_distance(a, 0, zero).distance == 0);
    const auto half = fixed_point_value(Rational::make(1, 2), 64);
    const auto d = nearest_distance(half, 1, fixed_point_value(Rational::make(0, 1), 64));
    CHECK(d.distance_value() == 0.5L);

    const auto narrow = fixed_point_value(kSqrt2, 40);
    CHECK_THROWS_AS(nearest_distance(narrow, 100'000'000, zero, 32), PrecisionError);
}

TEST_CASE("certified intervals contain the 512-bit value for random samples")
{
    std::mt19937_64 rng(99);
    const QuadraticSurd alphas[] = {kSqrt2, kGolden, kSqrt7};
    const RealLiteral betas[] = {Rational::make(0, 1), Rational::make(1, 3), QuadraticSurd::sqrt(3)};
    const Float beta_exact[] = {Float(0), Float(1) / 3, sqrt(Float(3))};
    for (int i = 0; i < 1000; ++i) {
        const std::size_t ai = rng() % 3;
        const std::size_t bi = rng() % 3;
        const std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(0, 100'000'000)(rng);
        const auto a = fixed_point_value(alphas[ai], 128);
        const auto b = fixed_point_value(betas[bi], 128);
        const auto d = nearest_distance(a, n, b);
        const Float truth = oracle::distance(exact(alphas[ai]), n, beta_exact[bi]);
        CAPTURE(n);
        CHECK(scaled(d.lower(), 128) <= truth);
        CHECK(scaled(d.upper(), 128) >= truth);
    }
}

TEST_CASE("chi_indicator examples")
{
    auto interval = [](double lo, double hi) {
        DistanceInterval d;
        d.frac_bits = 64;
        const BigInt l(std::ldexp(lo, 64));
        const BigInt h(std::ldexp(hi, 64));
        d.distance = (l + h) / 2;
        d.err_ulp = (h - l) / 2 + 1;
        return d;
    };
    CHECK(chi_indicator(interval(0.01, 0.0100001), 0.02) == ChiOutcome::in);
    CHECK(chi_indicator(interval(0.3, 0.3000001), 0.02) == ChiOutcome::out);
    CHECK(chi_indicator(interval(0.019, 0.021), 0.02) == ChiOutcome::boundary);
}

TEST_CASE("PhaseClassifier agrees with the BigInt path")
{
    std::mt19937_64 rng(5);
    const auto a = fixed_point_value(kSqrt7, 128);
    const auto b = fixed_point_value(Rational::make(1, 3), 128);
    for (const double delta : {0.3, 0.05, 0.001}) {
        const PhaseClassifier cls(a, b, delta);
        for (int i = 0; i < 2000; ++i) {
            const std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(0, 100'000'000)(rng);
            CHECK(cls.classify(n) == chi_indicator(nearest_distance(a, n, b), delta));
            const Float truth = oracle::frac(oracle::surd(0, 7, 1) * Float(n) + Float(1) / 3);
            CHECK(cls.phase(n) == doctest::Approx(static_cast<double>(truth)).epsilon(1e-12));
        }
    }
}
}
