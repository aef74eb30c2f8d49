#include "smoothdist/errors.hpp"
#include "smoothdist/sieve.hpp"

#include <omp.h>

#include <algorithm>
#include <string>

namespace smoothdist {

namespace {

template <class Visit>
void visit_products(std::uint64_t n, std::uint64_t limit, std::span<const std::uint32_t> primes,
                    std::size_t start, std::size_t last, bool squarefree, Visit& visit)
{
    for (std::size_t i = start; i <= last && i < primes.size(); ++i) {
        const std::uint64_t p = primes[i];
        if (n > limit / p) {
            break;
        }
        std::uint64_t m = n * p;
        while (true) {
            if (!visit(m)) {
                return;
            }
            visit_products(m, limit, primes, i + 1, last, squarefree, visit);
            if (squarefree || m > limit / p) {
                break;
            }
            m *= p;
        }
    }
}

// Window-smooth n in [lo, hi), ascending, appended to out. `primes` must
// contain every prime <= sqrt(hi - 1). Every prime up to that root is
// either multiplied into prod[n] (window primes, with multiplicity) or
// zeroes prod[n]; the surviving cofactor n / prod[n] is then 1 or a
// single prime larger than sqrt(n).
void sieve_segment(std::uint64_t lo, std::uint64_t hi, std::span<const std::uint32_t> primes,
                   const SmoothnessWindow& window, bool squarefree,
                   std::vector<std::uint32_t>& prod, std::vector<std::uint64_t>& out)
{
    const std::uint64_t len = hi - lo;
    prod.assign(len, 1);
    const std::uint64_t root = isqrt(hi - 1);
    for (const std::uint32_t p32 : primes) {
        const std::uint64_t p = p32;
        if (p > root) {
            break;
        }
        const std::uint64_t first = (lo + p - 1) / p * p;
        if (!window.contains(p)) {
            for (std::uint64_t m = first; m < hi; m += p) {
                prod[m - lo] = 0;
            }
            continue;
        }
        for (std::uint64_t m = first; m < hi; m += p) {
            prod[m - lo] *= p32;
        }
        std::uint64_t pk = p * p;
        while (pk < hi) {
            const std::uint64_t start = (lo + pk - 1) / pk * pk;
            if (squarefree) {
                for (std::uint64_t m = start; m < hi; m += pk) {
                    prod[m - lo] = 0;
                }
                break;
            }
            for (std::uint64_t m = start; m < hi; m += pk) {
                prod[m - lo] *= p32;
            }
            if (pk > (hi - 1) / p) {
                break;
            }
            pk *= p;
        }
    }
    for (std::uint64_t i = 0; i < len; ++i) {
        if (prod[i] == 0) {
            continue;
        }
        const std::uint64_t n = lo + i;
        const std::uint64_t rest = n / prod[i];
        if (rest == 1 || window.contains(rest)) {
            out.push_back(n);
        }
    }
}

int thread_count(int requested)
{
    return requested > 0 ? requested : omp_get_max_threads();
}

} // namespace

void for_each_prime_product(std::uint64_t limit, std::span<const std::uint32_t> primes,
                            std::size_t first, std::size_t last, bool squarefree,
                            const std::function<void(std::uint64_t)>& fn)
{
    if (limit < 1) {
        return;
    }
    fn(1);
    if (last < first || primes.empty()) {
        return;
    }
    auto visit = [&fn](std::uint64_t n) {
        fn(n);
        return true;
    };
    visit_products(1, limit, primes, first, last, squarefree, visit);
}

SmoothStream::SmoothStream(std::uint64_t x, SmoothnessWindow window, bool squarefree,
                           StreamOptions options)
    : x_(x), window_(window), squarefree_(squarefree), options_(options),
      strategy_(options.strategy)
{
    if (x < 1) {
        throw PreconditionError("enumerate_smooth: x must be >= 1");
    }
    if (x > options_.limits.max_x) {
        throw ResourceError("enumerate_smooth: x = " + std::to_string(x) + " exceeds configured limit "
                            + std::to_string(options_.limits.max_x));
    }
    if (options_.limits.segment_length < 1) {
        throw PreconditionError("enumerate_smooth: segment_length must be positive");
    }

    const std::uint64_t top = std::min(window_.z, x_);
    if (window_.empty() || top < window_.y) {
        // only n = 1
        strategy_ = EnumerationStrategy::prime_products;
        products_ = {1};
        return;
    }

    if (strategy_ == EnumerationStrategy::automatic) {
        strategy_ = EnumerationStrategy::segmented_sieve;
        if (top <= isqrt(x_)) {
            // Small prime set: try the depth-first route with a size cap
            // and fall back to sieving when the window turns out dense.
            auto table = sieve_primes(top, options_.limits);
            const std::size_t first = table.index_ge(window_.y);
            const std::uint64_t cap = x_ / 16 + 1024;
            std::vector<std::uint64_t> found{1};
            bool overflow = false;
            auto visit = [&](std::uint64_t n) {
                if (found.size() >= cap) {
                    overflow = true;
                    return false;
                }
                found.push_back(n);
                return true;
            };
            if (first < table.size()) {
                visit_products(1, x_, table.primes(), first, table.size() - 1, squarefree_, visit);
            }
            if (!overflow) {
                strategy_ = EnumerationStrategy::prime_products;
                std::sort(found.begin(), found.end());
                products_ = std::move(found);
                return;
            }
        }
    }

    if (strategy_ == EnumerationStrategy::prime_products) {
        auto table = sieve_primes(top, options_.limits);
        const std::size_t first = table.index_ge(window_.y);
        products_.push_back(1);
        if (first < table.size()) {
            auto collect = [this](std::uint64_t n) {
                products_.push_back(n);
                return true;
            };
            visit_products(1, x_, table.primes(), first, table.size() - 1, squarefree_, collect);
        }
        std::sort(products_.begin(), products_.end());
        return;
    }

    const auto threads = static_cast<std::uint64_t>(thread_count(options_.threads));
    const std::uint64_t seg = std::min(options_.limits.segment_length, x_);
    const double bytes = static_cast<double>(threads) * static_cast<double>(seg) * 12.0;
    if (bytes > static_cast<double>(options_.limits.memory_budget_bytes)) {
        throw ResourceError("enumerate_smooth: segment buffers exceed memory budget");
    }
    primes_ = std::make_shared<const PrimeTable>(sieve_primes(isqrt(x_), options_.limits));
}

bool SmoothStream::refill_segments()
{
    buffer_.clear();
    pos_ = 0;
    if (!emitted_one_) {
        emitted_one_ = true;
        buffer_.push_back(1);
    }
    if (next_lo_ > x_) {
        return !buffer_.empty();
    }

    const int threads = thread_count(options_.threads);
    const std::uint64_t seg = std::min(options_.limits.segment_length, x_);
    std::vector<std::uint64_t> starts;
    for (int t = 0; t < threads && next_lo_ <= x_; ++t) {
        starts.push_back(next_lo_);
        next_lo_ = std::min(next_lo_ + seg, x_ + 1);
    }
    const std::uint64_t end = next_lo_;
    std::vector<std::vector<std::uint64_t>> parts(starts.size());
    const auto primes = primes_->primes();
    const auto count = static_cast<std::int64_t>(starts.size());

#pragma omp parallel num_threads(threads)
    {
        std::vector<std::uint32_t> prod;
#pragma omp for schedule(static)
        for (std::int64_t k = 0; k < count; ++k) {
            const auto i = static_cast<std::size_t>(k);
            const std::uint64_t lo = starts[i];
            const std::uint64_t hi = i + 1 < starts.size() ? starts[i + 1] : end;
            sieve_segment(lo, hi, primes, window_, squarefree_, prod, parts[i]);
        }
    }
    for (const auto& part : parts) {
        buffer_.insert(buffer_.end(), part.begin(), part.end());
    }
    return true;
}

bool SmoothStream::refill()
{
    if (strategy_ == EnumerationStrategy::prime_products) {
        if (products_pos_ >= products_.size()) {
            return false;
        }
        const std::size_t slice = static_cast<std::size_t>(options_.limits.segment_length);
        const std::size_t end = std::min(products_.size(), products_pos_ + slice);
        buffer_.assign(products_.begin() + static_cast<std::ptrdiff_t>(products_pos_),
                       products_.begin() + static_cast<std::ptrdiff_t>(end));
        products_pos_ = end;
        pos_ = 0;
        return true;
    }
    while (emitted_one_ == false || next_lo_ <= x_) {
        refill_segments();
        if (!buffer_.empty()) {
            return true;
        }
    }
    return false;
}

std::optional<std::uint64_t> SmoothStream::next()
{
    while (pos_ >= buffer_.size()) {
        if (!refill()) {
            return std::nullopt;
        }
    }
    return buffer_[pos_++];
}

std::span<const std::uint64_t> SmoothStream::next_chunk()
{
    while (pos_ >= buffer_.size()) {
        if (!refill()) {
            return {};
        }
    }
    std::span<const std::uint64_t> chunk(buffer_.data() + pos_, buffer_.size() - pos_);
    pos_ = buffer_.size();
    return chunk;
}

SmoothStream enumerate_smooth(std::uint64_t x, SmoothnessWindow window, bool squarefree,
                              StreamOptions options)
{
    return SmoothStream(x, window, squarefree, options);
}

std::uint64_t psi_count(std::uint64_t x, SmoothnessWindow window, bool squarefree,
                        StreamOptions options)
{
    SmoothStream stream(x, window, squarefree, options);
    std::uint64_t total = 0;
    for (auto chunk = stream.next_chunk(); !chunk.empty(); chunk = stream.next_chunk()) {
        total += chunk.size();
    }
    return total;
}

} // namespace smoothdist
