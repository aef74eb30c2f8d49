#include "oracles.hpp"

#include "smoothdist/errors.hpp"
#include "smoothdist/expsums.hpp"
#include "smoothdist/reference.hpp"

#include "doctest.h"

#include <omp.h>

#include <random>

using namespace smoothdist;

namespace {

FixedPointReal sqrt2()
{
    return fixed_point_value(QuadraticSurd::sqrt(2), 128);
}

double ldist(long double t)
{
    const long double f = t - std::floor(t);
    return static_cast<double>(std::min(f, 1.0L - f));
}

} // namespace

TEST_SUITE("expsums")
{
TEST_CASE("geometric_phase_sum examples")
{
    CHECK(std::abs(geometric_phase_sum(0.0, 7) - std::complex<double>(7, 0)) < 1e-12);
    CHECK(std::abs(geometric_phase_sum(0.5, 2)) < 1e-12);
    CHECK(std::abs(geometric_phase_sum(0.3, 0)) == 0.0);
    CHECK(std::abs(geometric_phase_sum(3.0, 5) - std::complex<double>(5, 0)) < 1e-12);
    // either side of the Taylor cut-off
    for (const double t : {0.9e-12, 1.1e-12, -0.9e-12, 1.0 - 1.1e-12}) {
        const auto want = oracle::geometric(t, 1000);
        const auto got = geometric_phase_sum(t, 1000);
        CHECK(std::abs(got.real() - static_cast<double>(want.real())) <= 1e-10);
        CHECK(std::abs(got.imag() - static_cast<double>(want.imag())) <= 1e-10);
    }
}

TEST_CASE("geometric_phase_sum agrees with direct sums on random inputs")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        double theta = u(rng);
        if (i % 10 == 0) {
            theta = std::round(theta) + u(rng) * 1e-9;
        }
        const std::uint64_t n = rng() % 1001;
        const auto got = geometric_phase_sum(theta, n);
        const auto want = oracle::geometric(theta, n);
        CAPTURE(theta);
        CAPTURE(n);
        CHECK(std::abs(got.real() - static_cast<double>(want.real())) <= 1e-10);
        CHECK(std::abs(got.imag() - static_cast<double>(want.imag())) <= 1e-10);
        const double d = ldist(theta);
        const double cap = d > 0 ? std::min<double>(static_cast<double>(n), 1.0 / (2.0 * d)) : static_cast<double>(n);
        CHECK(std::abs(got) <= cap + 1e-9);
    }
}

TEST_CASE("divisor and Moebius tables")
{
    CHECK(divisor_tau(1) == 1);
    CHECK(divisor_tau(6) == 4);
    CHECK(divisor_tau(12) == 6);
    CHECK_THROWS_AS(divisor_tau(0), PreconditionError);
    const auto tau = tau_table(2000);
    const auto mu = moebius_table(2000);
    for (std::uint64_t n = 1; n <= 2000; ++n) {
        CHECK(tau[n] == oracle::tau(n));
        CHECK(divisor_tau(n) == oracle::tau(n));
        CHECK(mu[n] == oracle::mu(n));
    }
}

TEST_CASE("coefficient classes")
{
    const auto unit = CoefficientClass::unit().table(10);
    CHECK(unit[0] == 0.0);
    CHECK(unit[7] == 1.0);
    const auto primes = CoefficientClass::prime_indicator().table(10);
    CHECK(primes[7] == 1.0);
    CHECK(primes[9] == 0.0);
    const auto div = CoefficientClass::divisor_bounded().table(12);
    CHECK(div[12] == 6.0);
    const auto mu = CoefficientClass::moebius().table(30);
    CHECK(mu[30] == -1.0);
    CHECK(mu[12] == 0.0);
    CHECK_NOTHROW(CoefficientClass::custom({0, 1, -2, 2}));
    CHECK_THROWS_AS(CoefficientClass::custom({0, 2}), PreconditionError);
    const auto custom = CoefficientClass::custom({0, 1, 0.5}).table(5);
    CHECK(custom[2] == 0.5);
    CHECK(custom[5] == 0.0);
    CHECK(parse_coefficient_class("mu").kind() == CoefficientKind::moebius);
    CHECK(parse_coefficient_class("tau").kind() == CoefficientKind::divisor_bounded);
    CHECK_THROWS_AS(parse_coefficient_class("lambda"), ConfigError);
}

TEST_CASE("type1_sum trivial cases and guards")
{
    const SandwichPair c = build_sandwich(0.1, 50);
    CHECK(std::abs(type1_sum(sqrt2(), 1000, 10, CoefficientClass::custom({0}), c, Side::upper)) == 0.0);
    CHECK(std::abs(type1_sum(sqrt2(), 1000, 1001, CoefficientClass::unit(), c, Side::upper)) == 0.0);
    CHECK_THROWS_AS(type1_sum(sqrt2(), 2'000'000, 10, CoefficientClass::unit(), c, Side::upper), PreconditionError);
    CHECK_THROWS_AS(type1_sum(sqrt2(), 1000, 0, CoefficientClass::unit(), c, Side::upper), PreconditionError);
    SumLimits tight;
    tight.max_work = 100;
    CHECK_THROWS_AS(type1_sum(sqrt2(), 1000, 10, CoefficientClass::unit(), c, Side::upper, tight), ResourceError);
}

TEST_CASE("type1_sum single-m reduction")
{
    const SandwichPair c = build_sandwich(0.05, 200);
    const long double alpha = std::sqrt(2.0L);
    for (const std::uint64_t m0 : {7u, 40u, 63u}) {
        std::vector<double> w(m0 + 1, 0.0);
        w[m0] = 1.0;
        const std::uint64_t x = 10'000;
        const std::uint64_t M = m0 / 2 + 1;
        const auto got = type1_sum(sqrt2(), x, M, CoefficientClass::custom(w), c, Side::lower);
        std::complex<double> want = 0;
        for (std::size_t l = 1; l <= c.degree(); ++l) {
            long double t = alpha * static_cast<long double>(l * m0);
            t -= std::floor(t);
            want += c.coefficient(Side::lower, l) * geometric_phase_sum(static_cast<double>(t), x / m0);
        }
        CHECK(std::abs(got - want) <= 1e-8);
    }
}

TEST_CASE("type1_sum against the triple-loop reference")
{
    const SandwichPair c = build_sandwich(0.1, 30);
    for (const auto& a : {CoefficientClass::unit(), CoefficientClass::moebius(), CoefficientClass::divisor_bounded()}) {
        for (const std::uint64_t M : {1u, 5u, 40u}) {
            const auto got = type1_sum(sqrt2(), 3000, M, a, c, Side::upper);
            const auto want = reference::type1_sum(sqrt2(), 3000, M, a, c, Side::upper);
            CHECK(std::abs(got - want) <= 1e-8 * (1.0 + std::abs(want)));
        }
    }
}

TEST_CASE("type1 example ratio")
{
    const std::uint64_t x = 10'000;
    const auto cf = cf_expand(QuadraticSurd::sqrt(2));
    const auto q = select_denominator(x, cf).q.get_d();
    const double delta = std::pow(static_cast<double>(x), -0.25 + 0.1);
    const SandwichPair c = build_sandwich(delta, x);
    const double lhs = std::abs(type1_sum(sqrt2(), x, 100, CoefficientClass::unit(), c, Side::upper));
    CHECK(lhs <= 10.0 * type1_predictor(static_cast<double>(x), 100, q, delta, 2));
}

TEST_CASE("predictors")
{
    const double x = 1e4;
    const double lg = std::log(x);
    CHECK(type1_predictor(x, 100, 985, 0.1, 2) == doctest::Approx((100 + x / 985 + 98.5) * lg * lg));
    CHECK(type1_predictor(x, 100, 985, 0.1, 0) == doctest::Approx(100 + x / 985 + 98.5));
    // balanced: M = x/q = delta q
    CHECK(type1_predictor(x, 100, 100, 1.0, 1) == doctest::Approx(300 * lg));

    const double m = std::sqrt(x);
    const double lo = type2_predictor(x, m, 1e150, 1e-300, Type2Regime::low, 0);
    const double hi = type2_predictor(x, m, 1e150, 1e-300, Type2Regime::high, 0);
    // only M/x (low) or 1/M (high) survives, each equal to x^(-1/2)
    CHECK(lo == doctest::Approx(std::pow(x, 0.75)));
    CHECK(hi == doctest::Approx(lo));
    const double d = 0.0158;
    CHECK(type2_predictor(x, 50, 985, d, Type2Regime::low, 0)
          == doctest::Approx(x * std::sqrt(d / 50 + 50 / x + 1 / 985.0 + 985 * d / x)));
    CHECK(natural_regime(x, 50) == Type2Regime::low);
    CHECK(natural_regime(x, 500) == Type2Regime::high);
}

TEST_CASE("type2_sum trivial cases, reduction and reference")
{
    const SandwichPair c = build_sandwich(0.1, 40);
    CHECK(std::abs(type2_sum(sqrt2(), 2000, 10, CoefficientClass::unit(), CoefficientClass::custom({0}), c, Side::upper)) == 0.0);
    CHECK_THROWS_AS(type2_sum(sqrt2(), 20'000, 10, CoefficientClass::unit(), CoefficientClass::unit(), c, Side::upper),
                    PreconditionError);
    for (const std::uint64_t M : {3u, 30u, 300u}) {
        const auto t2 = type2_sum(sqrt2(), 2000, M, CoefficientClass::unit(), CoefficientClass::unit(), c, Side::lower);
        const auto t1 = type1_sum(sqrt2(), 2000, M, CoefficientClass::unit(), c, Side::lower);
        CHECK(std::abs(t2 - t1) <= 1e-8 * (1.0 + std::abs(t1)));
        const auto ref = reference::type2_sum(sqrt2(), 2000, M, CoefficientClass::moebius(), CoefficientClass::divisor_bounded(),
                                              c, Side::upper);
        const auto got = type2_sum(sqrt2(), 2000, M, CoefficientClass::moebius(), CoefficientClass::divisor_bounded(), c,
                                   Side::upper);
        CHECK(std::abs(got - ref) <= 1e-8 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("type2 example ratio")
{
    const std::uint64_t x = 5000;
    const auto q = select_denominator(x, cf_expand(QuadraticSurd::sqrt(2))).q.get_d();
    const double delta = std::pow(static_cast<double>(x), -0.25 + 0.1);
    const SandwichPair c = build_sandwich(delta, x);
    const double lhs = std::abs(
        type2_sum(sqrt2(), x, 50, CoefficientClass::unit(), CoefficientClass::moebius(), c, Side::upper));
    CHECK(lhs <= 10.0 * type2_predictor(static_cast<double>(x), 50, q, delta, Type2Regime::low, 2));
}

TEST_CASE("results do not depend on the thread count")
{
    const SandwichPair c = build_sandwich(0.05, 500);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto a1 = type1_sum(sqrt2(), 20'000, 30, CoefficientClass::moebius(), c, Side::upper);
    const auto b1 = type2_sum(sqrt2(), 3000, 30, CoefficientClass::unit(), CoefficientClass::moebius(), c, Side::upper);
    omp_set_num_threads(4);
    const auto a4 = type1_sum(sqrt2(), 20'000, 30, CoefficientClass::moebius(), c, Side::upper);
    const auto b4 = type2_sum(sqrt2(), 3000, 30, CoefficientClass::unit(), CoefficientClass::moebius(), c, Side::upper);
    omp_set_num_threads(saved);
    CHECK(a1 == a4);
    CHECK(b1 == b4);
}

TEST_CASE("perron_indicator")
{
    const double ln2 = std::log(2.0);
    CHECK(std::fabs(perron_indicator(0, ln2, 1e3) - 1.0) <= 5.0 / (1e3 * ln2));
    CHECK(std::fabs(perron_indicator(2, 1, 1e3)) <= 5.0 / 1e3);
    CHECK(perron_indicator(0.3, 1, 100) == perron_indicator(-0.3, 1, 100));
    CHECK_THROWS_AS(perron_indicator(1.0 + 1e-7, 1, 100), PreconditionError);
    CHECK_THROWS_AS(perron_indicator(0, -1, 100), PreconditionError);
    CHECK_THROWS_AS(perron_indicator(0, 1, 0), PreconditionError);
    for (const double rho : {0.5, 1.0, 2.5}) {
        for (const double gamma : {0.0, 0.25, 0.9, 1.7, 4.0}) {
            for (const double t : {10.0, 100.0, 1000.0}) {
                if (std::fabs(std::fabs(gamma) - rho) < 1e-3) {
                    continue;
                }
                CAPTURE(rho);
                CAPTURE(gamma);
                CAPTURE(t);
                CHECK(std::fabs(perron_indicator(gamma, rho, t) - oracle::perron(gamma, rho, t)) <= 1e-8);
            }
        }
    }
}
}
