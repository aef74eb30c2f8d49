#include "smoothdist/errors.hpp"
#include "smoothdist/expsums.hpp"
#include "smoothdist/sieve.hpp"

#include <cmath>

namespace smoothdist {

std::uint64_t divisor_tau(std::uint64_t n)
{
    if (n < 1) {
        throw PreconditionError("divisor_tau: n must be >= 1");
    }
    std::uint64_t tau = 1;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        tau *= e + 1;
    }
    if (n > 1) {
        tau *= 2;
    }
    return tau;
}

std::vector<int> moebius_table(std::uint64_t limit)
{
    std::vector<int> mu(limit + 1, 0);
    if (limit >= 1) {
        mu[1] = 1;
    }
    if (limit < 2) {
        return mu;
    }
    const FactorTable spf = spf_table(limit);
    for (std::uint64_t m = 2; m <= limit; ++m) {
        const std::uint64_t p = spf.spf(m);
        const std::uint64_t rest = m / p;
        mu[m] = rest % p == 0 ? 0 : -mu[rest];
    }
    return mu;
}

std::vector<std::uint32_t> tau_table(std::uint64_t limit)
{
    std::vector<std::uint32_t> tau(limit + 1, 0);
    if (limit >= 1) {
        tau[1] = 1;
    }
    if (limit < 2) {
        return tau;
    }
    const FactorTable spf = spf_table(limit);
    // exponent of spf(m) in m, to peel one prime power at a time
    std::vector<std::uint8_t> exponent(limit + 1, 0);
    for (std::uint64_t m = 2; m <= limit; ++m) {
        const std::uint64_t p = spf.spf(m);
        const std::uint64_t rest = m / p;
        if (rest % p == 0) {
            exponent[m] = static_cast<std::uint8_t>(exponent[rest] + 1);
            tau[m] = tau[rest] / exponent[m] * (exponent[m] + 1u);
        } else {
            exponent[m] = 1;
            tau[m] = tau[rest] * 2;
        }
    }
    return tau;
}

CoefficientClass CoefficientClass::custom(std::vector<double> values)
{
    for (std::size_t m = 1; m < values.size(); ++m) {
        if (std::fabs(values[m]) > static_cast<double>(divisor_tau(m))) {
            throw PreconditionError("custom coefficients: |a_" + std::to_string(m) + "| exceeds tau("
                                    + std::to_string(m) + ")");
        }
    }
    CoefficientClass out(CoefficientKind::custom);
    out.custom_ = std::move(values);
    return out;
}

std::string CoefficientClass::name() const
{
    switch (kind_) {
    case CoefficientKind::unit:
        return "unit";
    case CoefficientKind::moebius:
        return "moebius";
    case CoefficientKind::divisor_bounded:
        return "divisor";
    case CoefficientKind::prime_indicator:
        return "prime";
    case CoefficientKind::custom:
        return "custom";
    }
    return "unknown";
}

std::vector<double> CoefficientClass::table(std::uint64_t limit) const
{
    std::vector<double> out(limit + 1, 0.0);
    switch (kind_) {
    case CoefficientKind::unit:
        for (std::uint64_t m = 1; m <= limit; ++m) {
            out[m] = 1.0;
        }
        break;
    case CoefficientKind::moebius: {
        const auto mu = moebius_table(limit);
        for (std::uint64_t m = 1; m <= limit; ++m) {
            out[m] = mu[m];
        }
        break;
    }
    case CoefficientKind::divisor_bounded: {
        const auto tau = tau_table(limit);
        for (std::uint64_t m = 1; m <= limit; ++m) {
            out[m] = tau[m];
        }
        break;
    }
    case CoefficientKind::prime_indicator: {
        if (limit >= 2) {
            const FactorTable spf = spf_table(limit);
            for (std::uint64_t m = 2; m <= limit; ++m) {
                out[m] = spf.spf(m) == m ? 1.0 : 0.0;
            }
        }
        break;
    }
    case CoefficientKind::custom:
        for (std::uint64_t m = 1; m <= limit && m < custom_.size(); ++m) {
            out[m] = custom_[m];
        }
        break;
    }
    return out;
}

CoefficientClass parse_coefficient_class(const std::string& name)
{
    if (name == "unit") {
        return CoefficientClass::unit();
    }
    if (name == "moebius" || name == "mobius" || name == "mu") {
        return CoefficientClass::moebius();
    }
    if (name == "divisor" || name == "tau") {
        return CoefficientClass::divisor_bounded();
    }
    if (name == "prime") {
        return CoefficientClass::prime_indicator();
    }
    throw ConfigError("unknown coefficient class '" + name + "' (unit|moebius|divisor|prime)");
}

} // namespace smoothdist
