#pragma once

// Sieving for integers whose prime factors all lie in a window [y, z].
//
// Terminology:
//   Psi(x; y, z)  = #{ 1 <= n <= x : p | n  =>  y <= p <= z }
//   Psi*(x; y, z) = the same count restricted to squarefree n.
// n = 1 satisfies the condition vacuously and is always counted.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace smoothdist {

// Inclusive prime window [y, z]. z < y is legal and denotes the empty
// prime set, for which only n = 1 is window-smooth.
struct SmoothnessWindow {
    std::uint64_t y = 2;
    std::uint64_t z = 2;

    SmoothnessWindow() = default;
    SmoothnessWindow(std::uint64_t lo, std::uint64_t hi);

    bool empty() const { return z < y; }
    bool contains(std::uint64_t p) const { return y <= p && p <= z; }
    bool operator==(const SmoothnessWindow&) const = default;
};

struct SieveLimits {
    std::uint64_t memory_budget_bytes = std::uint64_t{512} << 20;
    std::uint64_t segment_length = std::uint64_t{1} << 22;
    std::uint64_t max_x = 100'000'000;
    // Upper limit for the exact (non-streaming) identity checks.
    std::uint64_t desk_scale_x = 1'000'000;
};

class PrimeTable {
public:
    PrimeTable() = default;

    std::uint64_t limit() const { return limit_; }
    std::span<const std::uint32_t> primes() const { return primes_; }
    std::size_t size() const { return primes_.size(); }
    std::uint32_t operator[](std::size_t i) const { return primes_[i]; }

    // Number of primes <= v. Requires v <= limit() or v >= every prime
    // in the table (the count is then only a lower bound).
    std::size_t count_le(std::uint64_t v) const;
    // Index of the first prime >= v (size() when there is none).
    std::size_t index_ge(std::uint64_t v) const;
    // Membership test for n <= limit().
    bool is_prime(std::uint64_t n) const;

private:
    friend PrimeTable sieve_primes(std::uint64_t, const SieveLimits&);

    std::uint64_t limit_ = 0;
    std::vector<std::uint32_t> primes_;
};

// All primes <= limit, ascending. Throws ResourceError if the sieve
// would not fit in limits.memory_budget_bytes.
PrimeTable sieve_primes(std::uint64_t limit, const SieveLimits& limits = {});

// Smallest prime factor for every n in [lo, hi).
class FactorTable {
public:
    FactorTable() = default;
    FactorTable(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint32_t> spf)
        : lo_(lo), hi_(hi), spf_(std::move(spf)) {}

    std::uint64_t lo() const { return lo_; }
    std::uint64_t hi() const { return hi_; }
    std::uint32_t spf(std::uint64_t n) const { return spf_[n - lo_]; }
    bool covers(std::uint64_t n) const { return lo_ <= n && n < hi_; }

    // Prime factorization (ascending, with multiplicity) of n. Only
    // valid for tables starting at lo <= 2 so every cofactor is covered.
    std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) const;

private:
    std::uint64_t lo_ = 0;
    std::uint64_t hi_ = 0;
    std::vector<std::uint32_t> spf_;
};

// Requires 2 <= lo < hi and primes.limit() >= floor(sqrt(hi)).
FactorTable spf_segment(std::uint64_t lo, std::uint64_t hi, const PrimeTable& primes);

// Convenience: spf for every n in [2, limit].
FactorTable spf_table(std::uint64_t limit, const SieveLimits& limits = {});

// P^+(n) by trial division against the table, which must reach
// floor(sqrt(n)). Returns nullopt for n = 1.
std::optional<std::uint64_t> largest_prime_factor(std::uint64_t n, const PrimeTable& primes);

// P^+(n) by repeated division through an spf table starting at 2.
std::optional<std::uint64_t> largest_prime_factor(std::uint64_t n, const FactorTable& table);

enum class EnumerationStrategy {
    automatic,
    segmented_sieve, // parallel segmented sieve, cost ~ x
    prime_products,  // depth-first products of window primes, cost ~ Psi
};

struct StreamOptions {
    EnumerationStrategy strategy = EnumerationStrategy::automatic;
    SieveLimits limits{};
    int threads = 0; // 0: OpenMP default
};

// Ascending stream of the window-smooth integers in [1, x]. Single
// consumer. Elements arrive in chunks; the first element is always 1.
class SmoothStream {
public:
    SmoothStream(std::uint64_t x, SmoothnessWindow window, bool squarefree,
                 StreamOptions options = {});

    std::optional<std::uint64_t> next();

    // The remaining elements of the current chunk, or the next chunk.
    // Empty once the stream is exhausted. Chunk sizes depend on the
    // thread count; the concatenated sequence does not.
    std::span<const std::uint64_t> next_chunk();

    std::uint64_t x() const { return x_; }
    const SmoothnessWindow& window() const { return window_; }
    bool squarefree() const { return squarefree_; }
    EnumerationStrategy strategy() const { return strategy_; }

private:
    bool refill();
    bool refill_segments();

    std::uint64_t x_;
    SmoothnessWindow window_;
    bool squarefree_;
    StreamOptions options_;
    EnumerationStrategy strategy_;

    std::shared_ptr<const PrimeTable> primes_;
    std::uint64_t next_lo_ = 2; // next unsieved segment start
    bool emitted_one_ = false;

    std::vector<std::uint64_t> buffer_;
    std::size_t pos_ = 0;

    // prime_products strategy: the whole sorted result, emitted in slices
    std::vector<std::uint64_t> products_;
    std::size_t products_pos_ = 0;
};

SmoothStream enumerate_smooth(std::uint64_t x, SmoothnessWindow window, bool squarefree,
                              StreamOptions options = {});

// Psi(x; y, z) or Psi*(x; y, z), by streaming.
std::uint64_t psi_count(std::uint64_t x, SmoothnessWindow window, bool squarefree,
                        StreamOptions options = {});

// The same value computed by the largest-prime-factor recursion
//   Psi(v; y, p_k) = 1 + sum_{y <= p <= min(p_k, v)} Psi(v / p; y, p)
// (squarefree: recurse on primes strictly below p), memoized on (v, k).
std::uint64_t psi_recursive(std::uint64_t x, SmoothnessWindow window, bool squarefree,
                            const SieveLimits& limits = {});

// Calls fn(n) for every n in [1, limit] whose prime factors all lie in
// primes[first..last] (inclusive indices), in no particular order.
// last < first visits only n = 1.
void for_each_prime_product(std::uint64_t limit, std::span<const std::uint32_t> primes,
                            std::size_t first, std::size_t last, bool squarefree,
                            const std::function<void(std::uint64_t)>& fn);

struct BuchstabDecomposition {
    // sum over p of S(A_p; y, p) with cofactor n > 1, keyed by p = P^+.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> by_largest_prime;
    std::uint64_t composite_part = 0;
    std::uint64_t prime_part = 0; // prime members of A in [y, z]
    std::uint64_t unit_term = 0;  // 1 if 1 is a member of A
    std::uint64_t total = 0;      // window-smooth members, counted independently

    std::int64_t residual() const
    {
        return static_cast<std::int64_t>(total)
               - static_cast<std::int64_t>(composite_part + prime_part + unit_term);
    }
};

// Exact largest-prime-factor split of the window-smooth members of A.
// The three parts are counted per prime p from the cofactor side; total
// is counted separately from the smooth stream. Requires x <= desk scale.
BuchstabDecomposition buchstab_decompose(std::uint64_t x, SmoothnessWindow window,
                                         const std::function<bool(std::uint64_t)>& member,
                                         const SieveLimits& limits = {});

// Exact integer helpers shared across modules.
std::uint64_t isqrt(std::uint64_t n);
// floor(n^(1/k)) for k >= 1.
std::uint64_t iroot(std::uint64_t n, unsigned k);

} // namespace smoothdist
