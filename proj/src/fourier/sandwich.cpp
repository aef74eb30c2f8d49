#include "smoothdist/errors.hpp"
#include "smoothdist/fourier.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

namespace smoothdist {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kResync = 32;
constexpr double kSlack = 1e-9;

// Vaaler's weight phi(t) = pi t (1 - t) cot(pi t) + t on (0, 1).
double vaaler_weight(double t)
{
    const double pt = std::numbers::pi * t;
    return pt * (1.0 - t) * std::cos(pt) / std::sin(pt) + t;
}

double reduce(double theta)
{
    return theta - std::nearbyint(theta);
}

} // namespace

SandwichPair::SandwichPair(double delta, std::size_t degree, std::vector<double> c_minus,
                           std::vector<double> c_plus)
    : delta_(delta), degree_(degree), c_minus_(std::move(c_minus)), c_plus_(std::move(c_plus))
{
    if (c_minus_.size() != degree_ || c_plus_.size() != degree_) {
        throw PreconditionError("SandwichPair: coefficient count must equal the degree");
    }
}

double SandwichPair::constant(Side side) const
{
    const double gap = 1.0 / static_cast<double>(degree_ + 1);
    return side == Side::lower ? 2.0 * delta_ - gap : 2.0 * delta_ + gap;
}

double SandwichPair::coefficient(Side side, std::size_t l) const
{
    if (l < 1 || l > degree_) {
        throw PreconditionError("SandwichPair::coefficient: l out of range");
    }
    return coefficients(side)[l - 1];
}

SandwichPair build_sandwich(double delta, std::size_t degree)
{
    if (!(delta > 0.0 && delta < 0.5)) {
        throw PreconditionError("build_sandwich: delta must lie in (0, 1/2), got " + std::to_string(delta));
    }
    if (degree < 1) {
        throw PreconditionError("build_sandwich: degree L must be >= 1");
    }
    const double h1 = static_cast<double>(degree + 1);
    std::vector<double> c_minus(degree);
    std::vector<double> c_plus(degree);
    for (std::size_t l = 1; l <= degree; ++l) {
        const double ld = static_cast<double>(l);
        const double t = ld / h1;
        const double angle = kTwoPi * reduce(ld * delta);
        const double smooth = vaaler_weight(t) * std::sin(angle) / (std::numbers::pi * ld);
        const double fejer = (1.0 - t) * std::cos(angle) / h1;
        c_minus[l - 1] = smooth - fejer;
        c_plus[l - 1] = smooth + fejer;
    }
    return SandwichPair(delta, degree, std::move(c_minus), std::move(c_plus));
}

std::pair<double, double> eval_both(const SandwichPair& pair, double theta)
{
    const double t = reduce(theta);
    const double wr = std::cos(kTwoPi * t);
    const double wi = std::sin(kTwoPi * t);
    const auto& lo = pair.coefficients(Side::lower);
    const auto& hi = pair.coefficients(Side::upper);
    const std::size_t degree = pair.degree();

    double zr = wr, zi = wi;
    double sum_lo = 0.0, sum_hi = 0.0;
    for (std::size_t l = 1; l <= degree; ++l) {
        sum_lo += lo[l - 1] * zr;
        sum_hi += hi[l - 1] * zr;
        if (l % kResync == 0) {
            const double angle = kTwoPi * reduce(static_cast<double>(l + 1) * t);
            zr = std::cos(angle);
            zi = std::sin(angle);
        } else {
            const double nr = zr * wr - zi * wi;
            zi = zr * wi + zi * wr;
            zr = nr;
        }
    }
    return {pair.constant(Side::lower) + 2.0 * sum_lo, pair.constant(Side::upper) + 2.0 * sum_hi};
}

double eval_sandwich(const SandwichPair& pair, Side side, double theta)
{
    const auto [lower, upper] = eval_both(pair, theta);
    return side == Side::lower ? lower : upper;
}

double oscillatory_part(const SandwichPair& pair, Side side, double theta)
{
    return eval_sandwich(pair, side, theta) - pair.constant(side);
}

double chi(double delta, double theta)
{
    return std::fabs(reduce(theta)) < delta ? 1.0 : 0.0;
}

std::vector<double> sandwich_grid(double delta, std::size_t grid_points)
{
    std::vector<double> grid;
    grid.reserve(grid_points + 10);
    for (std::size_t j = 0; j < grid_points; ++j) {
        grid.push_back(static_cast<double>(j) / static_cast<double>(grid_points));
    }
    for (const double edge : {delta, 1.0 - delta}) {
        grid.push_back(edge);
        for (const double eps : {1e-6, 1e-9}) {
            grid.push_back(edge - eps);
            grid.push_back(edge + eps);
        }
    }
    return grid;
}

std::size_t check_sandwich(const SandwichPair& pair, std::size_t grid_points)
{
    if (grid_points < 1) {
        throw PreconditionError("check_sandwich: grid_points must be >= 1");
    }
    const std::vector<double> grid = sandwich_grid(pair.delta(), grid_points);
    const auto count = static_cast<std::int64_t>(grid.size());
    std::int64_t violations = 0;
#pragma omp parallel for schedule(static) reduction(+ : violations)
    for (std::int64_t i = 0; i < count; ++i) {
        const double theta = grid[static_cast<std::size_t>(i)];
        const double target = chi(pair.delta(), theta);
        const auto [lower, upper] = eval_both(pair, theta);
        if (lower > target + kSlack || upper < target - kSlack) {
            ++violations;
        }
    }
    return static_cast<std::size_t>(violations);
}

void write_sandwich_csv(const SandwichPair& pair, std::ostream& out)
{
    const auto old_precision = out.precision(17);
    out << "l,c_minus,c_plus\n";
    for (std::size_t l = 1; l <= pair.degree(); ++l) {
        out << l << ',' << pair.coefficient(Side::lower, l) << ',' << pair.coefficient(Side::upper, l)
            << '\n';
    }
    out.precision(old_precision);
}

} // namespace smoothdist
