#include "smoothdist/errors.hpp"
#include "smoothdist/sieve.hpp"

#include <algorithm>

namespace smoothdist {

BuchstabDecomposition buchstab_decompose(std::uint64_t x, SmoothnessWindow window,
                                         const std::function<bool(std::uint64_t)>& member,
                                         const SieveLimits& limits)
{
    if (x < 1) {
        throw PreconditionError("buchstab_decompose: x must be >= 1");
    }
    if (x > limits.desk_scale_x) {
        throw PreconditionError("buchstab_decompose: x beyond desk-scale limit");
    }

    BuchstabDecomposition out;
    out.unit_term = member(1) ? 1 : 0;

    const std::uint64_t top = std::min(window.z, x);
    if (!window.empty() && top >= window.y) {
        const PrimeTable table = sieve_primes(top, limits);
        const auto primes = table.primes();
        const std::size_t first = table.index_ge(window.y);
        for (std::size_t j = first; j < table.size(); ++j) {
            const std::uint64_t p = primes[j];
            if (member(p)) {
                ++out.prime_part;
            }
            // members n * p with 1 < n <= x / p and P^+(n) <= p
            std::uint64_t count = 0;
            for_each_prime_product(x / p, primes, first, j, false, [&](std::uint64_t n) {
                if (n > 1 && member(n * p)) {
                    ++count;
                }
            });
            if (count > 0) {
                out.by_largest_prime.emplace_back(p, count);
                out.composite_part += count;
            }
        }
    }

    StreamOptions options;
    options.limits = limits;
    SmoothStream stream(x, window, false, options);
    for (auto chunk = stream.next_chunk(); !chunk.empty(); chunk = stream.next_chunk()) {
        out.total += static_cast<std::uint64_t>(std::count_if(chunk.begin(), chunk.end(), member));
    }
    return out;
}

} // namespace smoothdist
