#include "smoothdist/errors.hpp"
#include "smoothdist/sieve.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace smoothdist {

namespace {

class PsiRecursion {
public:
    PsiRecursion(const PrimeTable& table, std::size_t first, bool squarefree)
        : table_(table), primes_(table.primes()), first_(first), squarefree_(squarefree),
          stride_(table.size() + 1)
    {
    }

    // Count of n <= v whose prime factors lie among primes_[first_, top).
    std::uint64_t count(std::uint64_t v, std::size_t top, int depth)
    {
        top = std::min(top, table_.count_le(v));
        if (top <= first_) {
            return 1;
        }
        if (depth > 96) {
            throw ResourceError("psi_recursive: recursion depth guard tripped");
        }
        const std::uint64_t key = v * stride_ + top;
        if (const auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }

        std::uint64_t total = 1;
        std::size_t j = first_;
        // p^2 <= v: the cofactor may again contain p (or, squarefree, only
        // primes below p)
        for (; j < top && std::uint64_t{primes_[j]} * primes_[j] <= v; ++j) {
            total += count(v / primes_[j], squarefree_ ? j : j + 1, depth + 1);
        }
        // p^2 > v: the cofactor v / p is below p, so every admissible prime
        // up to v / p may appear. Group primes sharing the same quotient.
        while (j < top) {
            const std::uint64_t q = v / primes_[j];
            const std::size_t end = std::min(top, table_.count_le(v / q));
            const std::uint64_t inner = count(q, std::numeric_limits<std::size_t>::max(), depth + 1);
            total += static_cast<std::uint64_t>(end - j) * inner;
            j = end;
        }
        memo_.emplace(key, total);
        return total;
    }

private:
    const PrimeTable& table_;
    std::span<const std::uint32_t> primes_;
    std::size_t first_;
    bool squarefree_;
    std::uint64_t stride_;
    std::unordered_map<std::uint64_t, std::uint64_t> memo_;
};

} // namespace

std::uint64_t psi_recursive(std::uint64_t x, SmoothnessWindow window, bool squarefree,
                            const SieveLimits& limits)
{
    if (x < 1) {
        throw PreconditionError("psi_recursive: x must be >= 1");
    }
    if (x > limits.max_x) {
        throw ResourceError("psi_recursive: x exceeds configured limit");
    }
    const std::uint64_t top = std::min(window.z, x);
    if (window.empty() || top < window.y) {
        return 1;
    }
    const PrimeTable table = sieve_primes(top, limits);
    PsiRecursion recursion(table, table.index_ge(window.y), squarefree);
    return recursion.count(x, table.size(), 0);
}

} // namespace smoothdist
