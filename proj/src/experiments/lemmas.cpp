#include "smoothdist/errors.hpp"
#include "smoothdist/experiments.hpp"

#include <omp.h>

#include <cmath>

namespace smoothdist {

namespace {

constexpr std::uint64_t kLemmaMaxX = 10'000'000;

bool in_region(std::uint64_t p, std::uint64_t x, PrimeRegion region)
{
    const auto p2 = static_cast<unsigned __int128>(p) * p;
    const unsigned __int128 p4 = p2 * p2;
    const auto x1 = static_cast<unsigned __int128>(x);
    const unsigned __int128 x3 = x1 * x1 * x1;
    switch (region) {
    case PrimeRegion::low:
        return p4 < x1;
    case PrimeRegion::mid:
        return x1 <= p4 && p4 <= x3;
    case PrimeRegion::high:
        return p4 > x3;
    }
    return false;
}

// largest integer strictly below x^eps
std::uint64_t below_power(std::uint64_t x, double eps)
{
    const long double target = std::log(static_cast<long double>(x)) * eps;
    auto s = static_cast<std::uint64_t>(std::ceil(std::exp(target)));
    while (s > 1 && std::log(static_cast<long double>(s)) >= target) {
        --s;
    }
    while (std::log(static_cast<long double>(s + 1)) < target) {
        ++s;
    }
    return s;
}

} // namespace

DecompositionReport run_sieve_lemma_check(const ExperimentConfig& config, std::uint64_t x,
                                          PrimeRegion region, bool squarefree)
{
    if (x > kLemmaMaxX) {
        throw PreconditionError("sieve-lemma: x must be <= 10^7");
    }
    DecompositionReport report;
    report.kind = std::string(squarefree ? "sieve-lemma-sf/" : "sieve-lemma/") + to_string(region);
    report.x = x;
    report.window = config.window.resolve(x);
    report.delta = theorem_delta(config, x);

    const std::uint64_t y = report.window.y;
    const std::uint64_t z = std::min(report.window.z, x);
    std::uint64_t a_side = 0, b_side = 0, boundary = 0, prime_count = 0;

    if (y <= z) {
        const PrimeTable primes = sieve_primes(z, config.limits);
        const std::size_t first = primes.index_ge(y);
        const PhaseClassifier cls(fixed_point_value(config.alpha, 128), fixed_point_value(config.beta, 128),
                                  report.delta);
        const auto count = static_cast<std::int64_t>(primes.size());
        const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads) reduction(+ : a_side, b_side, boundary, prime_count)
        for (std::int64_t i = static_cast<std::int64_t>(first); i < count; ++i) {
            const std::uint64_t p = primes[static_cast<std::size_t>(i)];
            if (!in_region(p, x, region)) {
                continue;
            }
            ++prime_count;
            auto visit = [&](std::uint64_t n) {
                ++b_side;
                switch (cls.classify(n * p)) {
                case ChiOutcome::in:
                    ++a_side;
                    break;
                case ChiOutcome::boundary:
                    ++boundary;
                    break;
                case ChiOutcome::out:
                    break;
                }
            };
            const auto idx = static_cast<std::size_t>(i);
            if (squarefree && idx == first) {
                visit(1); // [y, p - 1] holds no prime
            } else {
                // S(A_p; y, p): cofactors over primes in [y, p]; T(A_p; y, p-1): squarefree over [y, p)
                for_each_prime_product(x / p, primes.primes(), first, squarefree ? idx - 1 : idx, squarefree,
                                       visit);
            }
        }
    }

    const double two_delta_b = 2.0 * report.delta * static_cast<double>(b_side);
    const double diff = static_cast<double>(a_side) - two_delta_b;
    const double exponent = x > 1 ? std::log(std::max(std::fabs(diff), 1.0)) / std::log(static_cast<double>(x)) : 0.0;
    const double target = 0.75 + config.epsilon / 2.0;
    report.terms = {
        {"primes", static_cast<double>(prime_count)},
        {"a_side", static_cast<double>(a_side)},
        {"b_side", static_cast<double>(b_side)},
        {"two_delta_b", two_delta_b},
        {"difference", diff},
        {"exponent", exponent},
        {"target", target},
        {"boundary", static_cast<double>(boundary)},
    };
    report.residual = 0;
    report.residual_bound = 0;
    report.holds = exponent <= target + 0.1;
    return report;
}

LowerBoundReport run_lower_bound_demo(const ExperimentConfig& config, GridPoint point)
{
    const std::uint64_t x = point.x;
    if (x > kLemmaMaxX) {
        throw PreconditionError("lower-bound: x must be <= 10^7");
    }
    if (x < 2) {
        throw PreconditionError("lower-bound: x must be >= 2");
    }
    LowerBoundReport report;
    report.x = x;
    report.q = point.q;
    report.epsilon = config.epsilon;
    report.threshold = std::pow(static_cast<double>(x), -1.0 / 3.0 + config.epsilon);
    report.smooth_limit = below_power(x, config.epsilon);
    report.target = 2.0 / 3.0 + config.epsilon;

    // x^eps-smooth integers up to x
    std::vector<bool> smooth(x + 1, false);
    StreamOptions options;
    options.limits = config.limits;
    options.threads = config.threads;
    const SmoothnessWindow window(2, report.smooth_limit < 2 ? 1 : report.smooth_limit);
    SmoothStream stream(x, window, false, options);
    for (auto chunk = stream.next_chunk(); !chunk.empty(); chunk = stream.next_chunk()) {
        for (const std::uint64_t n : chunk) {
            smooth[n] = true;
        }
    }

    // x <= a^3 < 8x
    std::uint64_t a_lo = iroot(x, 3);
    if (static_cast<unsigned __int128>(a_lo) * a_lo * a_lo < x) {
        ++a_lo;
    }
    const std::uint64_t a_hi = iroot(8 * x - 1, 3);

    const PhaseClassifier cls(fixed_point_value(config.alpha, 128), fixed_point_value(config.beta, 128),
                              report.threshold);
    std::vector<std::uint8_t> mark(x + 1, 0); // 1 in, 2 boundary
    for (std::uint64_t a = a_lo; a <= a_hi; ++a) {
        if (!smooth[a]) {
            continue;
        }
        ++report.a_count;
        for (std::uint64_t b = 1; b <= x / a; ++b) {
            if (!smooth[b]) {
                continue;
            }
            const std::uint64_t n = a * b;
            if (mark[n] != 0) {
                continue;
            }
            switch (cls.classify(n)) {
            case ChiOutcome::in:
                mark[n] = 1;
                break;
            case ChiOutcome::boundary:
                mark[n] = 2;
                break;
            case ChiOutcome::out:
                break;
            }
        }
    }
    for (const std::uint8_t m : mark) {
        report.count += m == 1;
        report.boundary += m == 2;
    }
    report.exponent = report.count > 0 ? std::log(static_cast<double>(report.count)) / std::log(static_cast<double>(x)) : 0.0;
    return report;
}

} // namespace smoothdist
