#pragma once

// Degree-L trigonometric minorant and majorant of the indicator of
// ||theta|| < delta:
//
//   lower(theta) = 2 delta - 1/(L+1) + sum_{0<|l|<=L} c_l^- e(l theta)
//   upper(theta) = 2 delta + 1/(L+1) + sum_{0<|l|<=L} c_l^+ e(l theta)
//
// Built from Vaaler's approximation psi* of the sawtooth psi(x) = {x} - 1/2
// and its Fejer-kernel error bound. For the interval (-delta, delta),
//
//   chi(x) = 2 delta + psi(-delta - x) + psi(x - delta),
//
// and replacing both psi terms by psi* +/- the error kernel gives
//
//   c_l^{+/-} = phi(l/(L+1)) sin(2 pi l delta) / (pi l)
//               +/- (1 - l/(L+1)) cos(2 pi l delta) / (L+1),
//   phi(t)    = pi t (1 - t) cot(pi t) + t.
//
// Coefficients are real and even in l, so each polynomial is a cosine sum.

#include <cstddef>
#include <ostream>
#include <utility>
#include <vector>

namespace smoothdist {

enum class Side { lower, upper };

class SandwichPair {
public:
    SandwichPair(double delta, std::size_t degree, std::vector<double> c_minus,
                 std::vector<double> c_plus);

    double delta() const { return delta_; }
    std::size_t degree() const { return degree_; }

    // 2 delta -/+ 1/(L+1)
    double constant(Side side) const;
    // c_l for 1 <= l <= L (and, by symmetry, for -l)
    double coefficient(Side side, std::size_t l) const;
    const std::vector<double>& coefficients(Side side) const
    {
        return side == Side::lower ? c_minus_ : c_plus_;
    }

private:
    double delta_;
    std::size_t degree_;
    std::vector<double> c_minus_; // index l - 1
    std::vector<double> c_plus_;
};

// Requires 0 < delta < 1/2 and L >= 1; throws PreconditionError otherwise.
SandwichPair build_sandwich(double delta, std::size_t degree);

// Full polynomial value including the constant term.
double eval_sandwich(const SandwichPair& pair, Side side, double theta);

// Polynomial value minus its constant term.
double oscillatory_part(const SandwichPair& pair, Side side, double theta);

// {lower(theta), upper(theta)} in one pass.
std::pair<double, double> eval_both(const SandwichPair& pair, double theta);

// The indicator itself: 1 if ||theta|| < delta.
double chi(double delta, double theta);

// Number of points where lower > chi + 1e-9 or upper < chi - 1e-9, on the
// uniform grid j / grid_points (j < grid_points) plus points within 1e-6
// and 1e-9 of the discontinuities +/- delta. Parallel over the grid.
std::size_t check_sandwich(const SandwichPair& pair, std::size_t grid_points);

// The grid used by check_sandwich, in evaluation order.
std::vector<double> sandwich_grid(double delta, std::size_t grid_points);

// CSV with header "l,c_minus,c_plus", one row per l = 1..L.
void write_sandwich_csv(const SandwichPair& pair, std::ostream& out);

} // namespace smoothdist
