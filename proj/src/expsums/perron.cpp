#include "smoothdist/errors.hpp"
#include "smoothdist/expsums.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace smoothdist {

double perron_indicator(double gamma, double rho, double t_max)
{
    if (!(rho > 0.0) || !(t_max > 0.0)) {
        throw PreconditionError("perron_indicator: rho and T must be positive");
    }
    if (std::fabs(std::fabs(gamma) - rho) < 1e-6) {
        throw PreconditionError("perron_indicator: |gamma| within 1e-6 of rho");
    }
    // the odd part sin(gamma t) sin(rho t) / t integrates to zero
    auto integrand = [gamma, rho](double t) {
        return std::cos(gamma * t) * std::sin(rho * t) / t;
    };
    using quadrature = boost::math::quadrature::gauss_kronrod<double, 15>;

    const double panel = std::numbers::pi / (std::fabs(gamma) + rho);
    const auto panels = static_cast<long>(std::ceil(t_max / panel));
    long double total = 0.0L;
    for (long k = 0; k < panels; ++k) {
        const double a = static_cast<double>(k) * panel;
        const double b = std::min(t_max, a + panel);
        total += quadrature::integrate(integrand, a, b, 8, 1e-12);
    }
    return static_cast<double>(2.0L * total / std::numbers::pi_v<long double>);
}

} // namespace smoothdist
