#include "kinsir/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace kinsir {

UnitRule gauss_legendre_unit(int order)
{
    // abscissae / weights on [-1,1], positive half
    std::vector<double> x, w;
    switch (order) {
    case 2:
        x = {0.0};
        w = {2.0};
        break;
    case 4:
        x = {0.57735026918962576451};
        w = {1.0};
        break;
    case 6:
        x = {0.0, 0.77459666924148337704};
        w = {0.88888888888888888889, 0.55555555555555555556};
        break;
    case 8:
        x = {0.33998104358485626480, 0.86113631159405257522};
        w = {0.65214515486254614263, 0.34785484513745385737};
        break;
    case 10:
        x = {0.0, 0.53846931010568309104, 0.90617984593866399280};
        w = {0.56888888888888888889, 0.47862867049936646804, 0.23692688505618908751};
        break;
    default:
        throw std::invalid_argument("quadrature order must be one of 2, 4, 6, 8, 10");
    }
    UnitRule rule;
    for (std::size_t k = x.size(); k-- > 0;) {
        if (x[k] == 0.0) continue;
        rule.nodes.push_back(0.5 * (1.0 - x[k]));
        rule.weights.push_back(0.5 * w[k]);
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
        rule.nodes.push_back(0.5 * (1.0 + x[k]));
        rule.weights.push_back(0.5 * w[k]);
    }
    return rule;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol)
{
    if (b <= a) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, rel_tol);
}

std::vector<double> trapezoid_weights(int n, double h)
{
    std::vector<double> w(static_cast<std::size_t>(n) + 1, h);
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
    return w;
}

}  // namespace kinsir
