#pragma once

// Serial, deliberately naive counterparts of the parallel kernels. Used by
// the tests as cross-checks and by the benchmark as the baseline.

#include "smoothdist/diophantine.hpp"
#include "smoothdist/expsums.hpp"
#include "smoothdist/fourier.hpp"
#include "smoothdist/sieve.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace smoothdist::reference {

// Window-smooth n in [1, x] by trial division of every n.
std::vector<std::uint64_t> smooth_list(std::uint64_t x, SmoothnessWindow window, bool squarefree);

// constant + 2 sum_l c_l cos(2 pi l theta), each cosine evaluated directly.
double eval_direct(const SandwichPair& pair, Side side, double theta);

// check_sandwich on one thread with eval_direct.
std::size_t check_sandwich(const SandwichPair& pair, std::size_t grid_points);

// The Type I / II sums as plain loops over (l, m, n), one exact phase per
// term; no geometric-series closed form.
std::complex<double> type1_sum(const FixedPointReal& alpha, std::uint64_t x, std::uint64_t m_base,
                               const CoefficientClass& a, const SandwichPair& c, Side side);
std::complex<double> type2_sum(const FixedPointReal& alpha, std::uint64_t x, std::uint64_t m_base,
                               const CoefficientClass& a, const CoefficientClass& b,
                               const SandwichPair& c, Side side);

struct ClassCounts {
    std::uint64_t in = 0;
    std::uint64_t out = 0;
    std::uint64_t boundary = 0;
};

// Classification of every window-smooth n <= x through nearest_distance and
// chi_indicator at the given precision.
ClassCounts classify_smooth(std::uint64_t x, SmoothnessWindow window, bool squarefree,
                            const RealLiteral& alpha, const RealLiteral& beta, double delta,
                            unsigned frac_bits);

} // namespace smoothdist::reference
