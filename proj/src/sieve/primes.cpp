#include "smoothdist/errors.hpp"
#include "smoothdist/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace smoothdist {

SmoothnessWindow::SmoothnessWindow(std::uint64_t lo, std::uint64_t hi) : y(lo), z(hi)
{
    if (y < 2) {
        throw PreconditionError("window lower bound y must be >= 2, got " + std::to_string(y));
    }
}

std::uint64_t isqrt(std::uint64_t n)
{
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<unsigned __int128>(r) * r > n) {
        --r;
    }
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) {
        ++r;
    }
    return r;
}

namespace {

// r^k <= n without overflow
bool pow_le(std::uint64_t r, unsigned k, std::uint64_t n)
{
    unsigned __int128 acc = 1;
    for (unsigned i = 0; i < k; ++i) {
        acc *= r;
        if (acc > n) {
            return false;
        }
    }
    return true;
}

} // namespace

std::uint64_t iroot(std::uint64_t n, unsigned k)
{
    if (k == 0) {
        throw PreconditionError("iroot: k must be >= 1");
    }
    if (k == 1 || n < 2) {
        return n;
    }
    auto r = static_cast<std::uint64_t>(std::pow(static_cast<long double>(n), 1.0L / k));
    while (r > 0 && !pow_le(r, k, n)) {
        --r;
    }
    while (pow_le(r + 1, k, n)) {
        ++r;
    }
    return r;
}

std::size_t PrimeTable::count_le(std::uint64_t v) const
{
    return static_cast<std::size_t>(
        std::upper_bound(primes_.begin(), primes_.end(), v,
                         [](std::uint64_t a, std::uint32_t p) { return a < p; })
        - primes_.begin());
}

std::size_t PrimeTable::index_ge(std::uint64_t v) const
{
    return static_cast<std::size_t>(
        std::lower_bound(primes_.begin(), primes_.end(), v,
                         [](std::uint32_t p, std::uint64_t a) { return p < a; })
        - primes_.begin());
}

bool PrimeTable::is_prime(std::uint64_t n) const
{
    if (n > limit_) {
        throw PreconditionError("PrimeTable::is_prime: n beyond table limit");
    }
    const auto i = index_ge(n);
    return i < primes_.size() && primes_[i] == n;
}

PrimeTable sieve_primes(std::uint64_t limit, const SieveLimits& limits)
{
    if (limit > 0xFFFFFFFFull) {
        throw ResourceError("sieve_primes: limit exceeds 32-bit prime storage");
    }
    // odd-only byte sieve plus roughly limit / ln(limit) stored primes
    const double stored = limit < 16 ? 8.0 : 1.3 * static_cast<double>(limit) / std::log(static_cast<double>(limit));
    const double bytes = static_cast<double>(limit) / 2.0 + 4.0 * stored;
    if (bytes > static_cast<double>(limits.memory_budget_bytes)) {
        throw ResourceError("sieve_primes: limit " + std::to_string(limit) + " exceeds memory budget");
    }

    PrimeTable table;
    table.limit_ = limit;
    if (limit < 2) {
        return table;
    }
    table.primes_.push_back(2);
    // index i <-> odd number 2i + 1
    const std::uint64_t half = (limit - 1) / 2 + 1;
    std::vector<char> composite(half, 0);
    for (std::uint64_t i = 1; i < half; ++i) {
        if (composite[i]) {
            continue;
        }
        const std::uint64_t p = 2 * i + 1;
        table.primes_.push_back(static_cast<std::uint32_t>(p));
        if (p * p > limit) {
            continue;
        }
        for (std::uint64_t j = p * p / 2; j < half; j += p) {
            composite[j] = 1;
        }
    }
    return table;
}

FactorTable spf_segment(std::uint64_t lo, std::uint64_t hi, const PrimeTable& primes)
{
    if (lo < 2 || lo >= hi) {
        throw PreconditionError("spf_segment: requires 2 <= lo < hi");
    }
    if (primes.limit() < isqrt(hi)) {
        throw PreconditionError("spf_segment: prime table does not reach sqrt(hi)");
    }
    if (hi > 0xFFFFFFFFull) {
        throw ResourceError("spf_segment: hi exceeds 32-bit factor storage");
    }
    std::vector<std::uint32_t> spf(hi - lo, 0);
    for (const std::uint32_t p32 : primes.primes()) {
        const std::uint64_t p = p32;
        if (p * p >= hi) {
            break;
        }
        std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
        for (std::uint64_t m = start; m < hi; m += p) {
            if (spf[m - lo] == 0) {
                spf[m - lo] = p32;
            }
        }
    }
    for (std::uint64_t n = lo; n < hi; ++n) {
        if (spf[n - lo] == 0) {
            spf[n - lo] = static_cast<std::uint32_t>(n);
        }
    }
    return FactorTable(lo, hi, std::move(spf));
}

FactorTable spf_table(std::uint64_t limit, const SieveLimits& limits)
{
    if (static_cast<double>(limit) * 4.0 > static_cast<double>(limits.memory_budget_bytes)) {
        throw ResourceError("spf_table: limit exceeds memory budget");
    }
    if (limit < 2) {
        return FactorTable(2, 2, {});
    }
    return spf_segment(2, limit + 1, sieve_primes(isqrt(limit + 1), limits));
}

std::vector<std::pair<std::uint64_t, unsigned>> FactorTable::factorize(std::uint64_t n) const
{
    if (lo_ > 2) {
        throw PreconditionError("FactorTable::factorize: table must start at 2");
    }
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    while (n > 1) {
        if (!covers(n)) {
            throw PreconditionError("FactorTable::factorize: n outside table");
        }
        const std::uint64_t p = spf(n);
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    return out;
}

std::optional<std::uint64_t> largest_prime_factor(std::uint64_t n, const PrimeTable& primes)
{
    if (n == 0) {
        throw PreconditionError("largest_prime_factor: n must be >= 1");
    }
    if (n == 1) {
        return std::nullopt;
    }
    std::uint64_t largest = 1;
    for (const std::uint32_t p32 : primes.primes()) {
        const std::uint64_t p = p32;
        if (p * p > n) {
            break;
        }
        if (n % p == 0) {
            largest = p;
            do {
                n /= p;
            } while (n % p == 0);
        }
    }
    if (n > 1) {
        if (primes.limit() < isqrt(n)) {
            throw PreconditionError("largest_prime_factor: prime table does not reach sqrt(n)");
        }
        largest = std::max(largest, n);
    }
    return largest;
}

std::optional<std::uint64_t> largest_prime_factor(std::uint64_t n, const FactorTable& table)
{
    if (n == 0) {
        throw PreconditionError("largest_prime_factor: n must be >= 1");
    }
    if (n == 1) {
        return std::nullopt;
    }
    return table.factorize(n).back().first;
}

} // namespace smoothdist
