#include "smoothdist/errors.hpp"
#include "smoothdist/experiments.hpp"

#include <algorithm>

namespace smoothdist {

namespace {

std::function<bool(std::uint64_t)> membership(const ExperimentConfig& config, std::uint64_t x, MemberSet set)
{
    if (set == MemberSet::all) {
        return [x](std::uint64_t n) { return n >= 2 && n <= x; };
    }
    const PhaseClassifier cls(fixed_point_value(config.alpha, 128), fixed_point_value(config.beta, 128),
                              theorem_delta(config, x));
    return [x, cls](std::uint64_t n) { return n >= 2 && n <= x && cls.classify(n) == ChiOutcome::in; };
}

void require_desk_scale(const ExperimentConfig& config, std::uint64_t x, const char* what)
{
    if (x > config.limits.desk_scale_x) {
        throw PreconditionError(std::string(what) + ": x beyond desk-scale limit "
                                + std::to_string(config.limits.desk_scale_x));
    }
}

// p^4 > x^3
bool above_three_quarters(std::uint64_t p, std::uint64_t x)
{
    const auto p2 = static_cast<unsigned __int128>(p) * p;
    const auto x3 = static_cast<unsigned __int128>(x) * x * x;
    return p2 * p2 > x3;
}

} // namespace

DecompositionReport run_buchstab_check(const ExperimentConfig& config, std::uint64_t x, MemberSet set)
{
    require_desk_scale(config, x, "buchstab");
    DecompositionReport report;
    report.kind = "buchstab/" + to_string(set);
    report.x = x;
    report.window = config.window.resolve(x);
    report.delta = set == MemberSet::all ? 0.0 : theorem_delta(config, x);

    const auto split = buchstab_decompose(x, report.window, membership(config, x, set), config.limits);
    report.terms = {
        {"total", static_cast<double>(split.total)},
        {"unit", static_cast<double>(split.unit_term)},
        {"prime", static_cast<double>(split.prime_part)},
        {"composite", static_cast<double>(split.composite_part)},
    };
    report.residual = split.residual();
    report.residual_bound = 0;
    report.holds = report.residual == 0;
    return report;
}

DecompositionReport run_role_reversal_check(const ExperimentConfig& config, std::uint64_t x,
                                            MemberSet set)
{
    require_desk_scale(config, x, "role-reversal");
    DecompositionReport report;
    report.kind = "role-reversal/" + to_string(set);
    report.x = x;
    report.window = config.window.resolve(x);
    report.delta = set == MemberSet::all ? 0.0 : theorem_delta(config, x);
    const auto member = membership(config, x, set);

    const std::uint64_t y = report.window.y;
    const std::uint64_t z = std::min(report.window.z, x);
    std::uint64_t lhs = 0, rhs = 0, edges = 0;

    if (x >= 2 && y <= z) {
        const FactorTable spf = spf_table(x, config.limits);
        auto is_prime = [&spf](std::uint64_t n) { return n >= 2 && spf.spf(n) == n; };
        // all prime factors of n at least y
        auto c = [&spf, y](std::uint64_t n) { return n == 1 || spf.spf(n) >= y; };
        auto below_quarter = [x](std::uint64_t n) {
            const auto n2 = static_cast<unsigned __int128>(n) * n;
            return n2 * n2 < x;
        };

        // sum_{x^(3/4) < p <= z, p >= y} S(A_p; y, p)
        for (std::uint64_t p = y; p <= z; ++p) {
            if (!is_prime(p) || !above_three_quarters(p, x)) {
                continue;
            }
            for (std::uint64_t n = 1; n <= x / p; ++n) {
                // n <= x/p < p, so P+(n) <= p holds automatically
                if (c(n) && member(n * p)) {
                    ++lhs;
                }
            }
        }

        // sum_{n < x^(1/4)} c_n S(A'_n; (x/n)^(1/2))
        for (std::uint64_t n = 1; below_quarter(n); ++n) {
            if (!c(n)) {
                continue;
            }
            const std::uint64_t hi = std::min(z, x / n);
            for (std::uint64_t m = std::max<std::uint64_t>(y, 2); m <= hi; ++m) {
                if (!above_three_quarters(m, x)) {
                    continue;
                }
                // no prime factor q of m with q^2 < x/n
                const auto q = static_cast<unsigned __int128>(spf.spf(m));
                if (q * q * n < x) {
                    continue;
                }
                if (member(m * n)) {
                    ++rhs;
                    if (!is_prime(m)) {
                        ++edges;
                    }
                }
            }
        }
    }

    report.terms = {
        {"lhs", static_cast<double>(lhs)},
        {"rhs", static_cast<double>(rhs)},
        {"composite_edges", static_cast<double>(edges)},
    };
    report.residual = static_cast<std::int64_t>(rhs) - static_cast<std::int64_t>(lhs);
    report.residual_bound = static_cast<std::int64_t>(divisor_tau(std::max<std::uint64_t>(x, 1)));
    report.holds = report.residual == static_cast<std::int64_t>(edges) && report.residual >= 0
                   && report.residual <= report.residual_bound;
    return report;
}

} // namespace smoothdist
