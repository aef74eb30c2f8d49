#include "smoothdist/errors.hpp"
#include "smoothdist/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace smoothdist {

namespace {

using cplx = std::complex<double>;

constexpr double kPi = std::numbers::pi;
constexpr std::int64_t kBlock = 64;
constexpr std::uint64_t kResync = 32;

double reduce(double theta)
{
    return theta - std::nearbyint(theta);
}

PhaseClassifier alpha_only(const FixedPointReal& alpha)
{
    FixedPointReal zero;
    zero.frac_bits = 128;
    return PhaseClassifier(alpha, zero, 0.0);
}

cplx ordered_sum(const std::vector<cplx>& parts)
{
    cplx total = 0.0;
    for (const cplx& p : parts) {
        total += p;
    }
    return total;
}

} // namespace

cplx geometric_phase_sum(double theta, std::uint64_t n_terms)
{
    if (n_terms == 0) {
        return 0.0;
    }
    const double t = reduce(theta);
    const auto n = static_cast<double>(n_terms);
    if (std::fabs(t) < 1e-12) {
        // sum_{k<=N} (1 + 2 pi i k t - 2 pi^2 k^2 t^2)
        const double s1 = n * (n + 1.0) / 2.0;
        const double s2 = n * (n + 1.0) * (2.0 * n + 1.0) / 6.0;
        return {n - 2.0 * kPi * kPi * t * t * s2, 2.0 * kPi * t * s1};
    }
    // e((N+1) t / 2) sin(pi N t) / sin(pi t), angles reduced before scaling
    const double magnitude = std::sin(kPi * (n * t - 2.0 * std::nearbyint(n * t / 2.0))) / std::sin(kPi * t);
    const double half_turns = (n + 1.0) * t;
    const double angle = kPi * (half_turns - 2.0 * std::nearbyint(half_turns / 2.0));
    return std::polar(1.0, angle) * magnitude;
}

cplx type1_sum(const FixedPointReal& alpha, std::uint64_t x, std::uint64_t m_base,
               const CoefficientClass& a, const SandwichPair& c, Side side, const SumLimits& limits)
{
    if (m_base < 1) {
        throw PreconditionError("type1_sum: M must be >= 1");
    }
    if (x > limits.type1_max_x) {
        throw PreconditionError("type1_sum: x beyond desk-scale limit");
    }
    if (m_base > x) {
        return 0.0;
    }
    const std::uint64_t m_end = std::min(2 * m_base - 1, x);
    const std::size_t degree = c.degree();
    if (static_cast<double>(degree) * static_cast<double>(m_end - m_base + 1) > limits.max_work) {
        throw ResourceError("type1_sum: (l, m) range exceeds work budget");
    }
    const std::vector<double> weights = a.table(m_end);
    const auto& coeffs = c.coefficients(side);
    const PhaseClassifier phases = alpha_only(alpha);

    const auto blocks = (static_cast<std::int64_t>(degree) + kBlock - 1) / kBlock;
    std::vector<cplx> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t blk = 0; blk < blocks; ++blk) {
        cplx acc = 0.0;
        const auto l_end = std::min<std::int64_t>((blk + 1) * kBlock, static_cast<std::int64_t>(degree));
        for (std::int64_t l = blk * kBlock + 1; l <= l_end; ++l) {
            cplx inner = 0.0;
            for (std::uint64_t m = m_base; m <= m_end; ++m) {
                if (weights[m] == 0.0) {
                    continue;
                }
                const double theta = phases.alpha_phase(static_cast<std::uint64_t>(l) * m);
                inner += weights[m] * geometric_phase_sum(theta, x / m);
            }
            acc += coeffs[static_cast<std::size_t>(l - 1)] * inner;
        }
        partial[static_cast<std::size_t>(blk)] = acc;
    }
    return ordered_sum(partial);
}

cplx type2_sum(const FixedPointReal& alpha, std::uint64_t x, std::uint64_t m_base,
               const CoefficientClass& a, const CoefficientClass& b, const SandwichPair& c, Side side,
               const SumLimits& limits)
{
    if (m_base < 1) {
        throw PreconditionError("type2_sum: M must be >= 1");
    }
    if (x > limits.type2_max_x) {
        throw PreconditionError("type2_sum: x beyond desk-scale limit");
    }
    if (m_base > x) {
        return 0.0;
    }
    const std::uint64_t m_end = std::min(2 * m_base - 1, x);
    const std::uint64_t n_max = x / m_base;
    const std::size_t degree = c.degree();
    double triples = 0.0;
    for (std::uint64_t m = m_base; m <= m_end; ++m) {
        triples += static_cast<double>(x / m);
    }
    if (triples * static_cast<double>(degree) > limits.max_work) {
        throw ResourceError("type2_sum: (l, m, n) range exceeds work budget");
    }
    const std::vector<double> a_w = a.table(m_end);
    const std::vector<double> b_w = b.table(n_max);
    const auto& coeffs = c.coefficients(side);
    const PhaseClassifier phases = alpha_only(alpha);

    const auto blocks = (static_cast<std::int64_t>(degree) + kBlock - 1) / kBlock;
    std::vector<cplx> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t blk = 0; blk < blocks; ++blk) {
        cplx acc = 0.0;
        const auto l_end = std::min<std::int64_t>((blk + 1) * kBlock, static_cast<std::int64_t>(degree));
        for (std::int64_t l = blk * kBlock + 1; l <= l_end; ++l) {
            cplx over_m = 0.0;
            for (std::uint64_t m = m_base; m <= m_end; ++m) {
                if (a_w[m] == 0.0) {
                    continue;
                }
                const std::uint64_t lm = static_cast<std::uint64_t>(l) * m;
                const double t = reduce(phases.alpha_phase(lm));
                const double wr = std::cos(2.0 * kPi * t);
                const double wi = std::sin(2.0 * kPi * t);
                double zr = wr, zi = wi;
                double sr = 0.0, si = 0.0;
                const std::uint64_t n_end = x / m;
                for (std::uint64_t n = 1; n <= n_end; ++n) {
                    sr += b_w[n] * zr;
                    si += b_w[n] * zi;
                    if (n % kResync == 0) {
                        const double angle = 2.0 * kPi * reduce(phases.alpha_phase(lm * (n + 1)));
                        zr = std::cos(angle);
                        zi = std::sin(angle);
                    } else {
                        const double nr = zr * wr - zi * wi;
                        zi = zr * wi + zi * wr;
                        zr = nr;
                    }
                }
                over_m += a_w[m] * cplx(sr, si);
            }
            acc += coeffs[static_cast<std::size_t>(l - 1)] * over_m;
        }
        partial[static_cast<std::size_t>(blk)] = acc;
    }
    return ordered_sum(partial);
}

double type1_predictor(double x, double m_base, double q, double delta, double kappa)
{
    return (m_base + x / q + delta * q) * std::pow(std::log(x), kappa);
}

double type2_predictor(double x, double m_base, double q, double delta, Type2Regime regime, double kappa)
{
    const double bracket = regime == Type2Regime::low
                               ? delta / m_base + m_base / x + 1.0 / q + q * delta / x
                               : m_base * delta / x + 1.0 / m_base + 1.0 / q + q * delta / x;
    return x * std::sqrt(bracket) * std::pow(std::log(x), kappa);
}

Type2Regime natural_regime(double x, double m_base)
{
    return m_base * m_base <= x ? Type2Regime::low : Type2Regime::high;
}

} // namespace smoothdist
