#include "boussinesq/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/legendre.hpp>

namespace boussinesq {

namespace {

LineRule make_gauss_legendre(int n)
{
    // legendre_p_zeros returns the non-negative roots of P_n on [-1, 1].
    const auto zeros = boost::math::legendre_p_zeros<double>(n);
    std::vector<std::pair<double, double>> nodes;
    for (double x : zeros) {
        const double dp = boost::math::legendre_p_prime(n, x);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes.emplace_back(x, w);
        if (x != 0.0) nodes.emplace_back(-x, w);
    }
    std::sort(nodes.begin(), nodes.end());
    LineRule rule;
    for (const auto& [x, w] : nodes) {
        rule.points.push_back(0.5 * (x + 1.0));
        rule.weights.push_back(0.5 * w);
    }
    return rule;
}

QuadratureRule make_triangle_rule(int degree)
{
    // f(x, y) on {x, y >= 0, x + y <= 1} with x = u, y = (1 - u) v picks up a
    // Jacobian (1 - u), so the u direction needs exactness degree + 1.
    const LineRule& line = gauss_legendre((degree + 3) / 2);
    QuadratureRule rule;
    rule.degree = degree;
    for (std::size_t a = 0; a < line.points.size(); ++a) {
        for (std::size_t b = 0; b < line.points.size(); ++b) {
            const double u = line.points[a];
            const double x = u;
            const double y = (1.0 - u) * line.points[b];
            rule.points.push_back({1.0 - x - y, x, y});
            // reference area is 1/2; normalize weights to sum to 1
            rule.weights.push_back(2.0 * line.weights[a] * line.weights[b] * (1.0 - u));
        }
    }
    return rule;
}

}  // namespace

const LineRule& gauss_legendre(int n)
{
    if (n < 1 || n > 64) throw std::invalid_argument("gauss_legendre: unsupported point count");
    static std::mutex mutex;
    static std::map<int, LineRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

const QuadratureRule& quadrature_rule(int degree)
{
    if (degree < 0 || degree > kMaxTriangleDegree) {
        throw std::invalid_argument("quadrature_rule: unsupported degree " + std::to_string(degree));
    }
    static std::mutex mutex;
    static std::map<int, QuadratureRule> cache;
    {
        std::lock_guard lock(mutex);
        auto it = cache.find(degree);
        if (it != cache.end()) return it->second;
    }
    QuadratureRule rule = make_triangle_rule(degree);
    std::lock_guard lock(mutex);
    return cache.emplace(degree, std::move(rule)).first->second;
}

}  // namespace boussinesq
