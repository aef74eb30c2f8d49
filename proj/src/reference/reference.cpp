#include "smoothdist/reference.hpp"

#include <cmath>
#include <numbers>

namespace smoothdist::reference {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool window_smooth(std::uint64_t n, SmoothnessWindow window, bool squarefree)
{
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) {
            continue;
        }
        if (!window.contains(p)) {
            return false;
        }
        n /= p;
        if (n % p == 0 && squarefree) {
            return false;
        }
        while (n % p == 0) {
            n /= p;
        }
    }
    return n == 1 || window.contains(n);
}

std::complex<double> unit_phase(const PhaseClassifier& phases, std::uint64_t k)
{
    const double angle = kTwoPi * phases.alpha_phase(k);
    return {std::cos(angle), std::sin(angle)};
}

} // namespace

std::vector<std::uint64_t> smooth_list(std::uint64_t x, SmoothnessWindow window, bool squarefree)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 1; n <= x; ++n) {
        if (window_smooth(n, window, squarefree)) {
            out.push_back(n);
        }
    }
    return out;
}

double eval_direct(const SandwichPair& pair, Side side, double theta)
{
    const auto& c = pair.coefficients(side);
    double sum = 0.0;
    for (std::size_t l = 1; l <= pair.degree(); ++l) {
        sum += c[l - 1] * std::cos(kTwoPi * static_cast<double>(l) * theta);
    }
    return pair.constant(side) + 2.0 * sum;
}

std::size_t check_sandwich(const SandwichPair& pair, std::size_t grid_points)
{
    std::size_t violations = 0;
    for (const double theta : sandwich_grid(pair.delta(), grid_points)) {
        const double target = chi(pair.delta(), theta);
        if (eval_direct(pair, Side::lower, theta) > target + 1e-9
            || eval_direct(pair, Side::upper, theta) < target - 1e-9) {
            ++violations;
        }
    }
    return violations;
}

std::complex<double> type1_sum(const FixedPointReal& alpha, std::uint64_t x, std::uint64_t m_base,
                               const CoefficientClass& a, const SandwichPair& c, Side side)
{
    return reference::type2_sum(alpha, x, m_base, a, CoefficientClass::unit(), c, side);
}

std::complex<double> type2_sum(const FixedPointReal& alpha, std::uint64_t x, std::uint64_t m_base,
                               const CoefficientClass& a, const CoefficientClass& b,
                               const SandwichPair& c, Side side)
{
    if (m_base > x) {
        return 0.0;
    }
    FixedPointReal zero;
    zero.frac_bits = 128;
    const PhaseClassifier phases(alpha, zero, 0.0);
    const std::uint64_t m_end = std::min(2 * m_base - 1, x);
    const auto a_w = a.table(m_end);
    const auto b_w = b.table(x / m_base);
    std::complex<double> total = 0.0;
    for (std::size_t l = 1; l <= c.degree(); ++l) {
        for (std::uint64_t m = m_base; m <= m_end; ++m) {
            for (std::uint64_t n = 1; n <= x / m; ++n) {
                total += c.coefficient(side, l) * a_w[m] * b_w[n] * unit_phase(phases, l * m * n);
            }
        }
    }
    return total;
}

ClassCounts classify_smooth(std::uint64_t x, SmoothnessWindow window, bool squarefree,
                            const RealLiteral& alpha, const RealLiteral& beta, double delta,
                            unsigned frac_bits)
{
    const FixedPointReal a = fixed_point_value(alpha, frac_bits);
    const FixedPointReal b = fixed_point_value(beta, frac_bits);
    ClassCounts counts;
    for (const std::uint64_t n : smooth_list(x, window, squarefree)) {
        switch (chi_indicator(nearest_distance(a, n, b, 0), delta)) {
        case ChiOutcome::in:
            ++counts.in;
            break;
        case ChiOutcome::out:
            ++counts.out;
            break;
        case ChiOutcome::boundary:
            ++counts.boundary;
            break;
        }
    }
    return counts;
}

} // namespace smoothdist::reference
