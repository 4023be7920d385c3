#include "popslab/bessel.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace pops {
namespace {

constexpr int kGaussOrder = 24;
constexpr int kPanels = 8;

struct GaussRule {
    std::array<double, kGaussOrder> node;    // on (-1, 1)
    std::array<double, kGaussOrder> weight;
};

// Gauss-Legendre nodes by Newton iteration on the Legendre recurrence.
GaussRule make_rule() {
    GaussRule r{};
    const int n = kGaussOrder;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.node[i] = -x;
        r.node[n - 1 - i] = x;
        r.weight[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weight[n - 1 - i] = r.weight[i];
    }
    return r;
}

double j0_series(double x) {
    // J0(x) = sum_k (-x^2/4)^k / (k!)^2
    const double m = -0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 60; ++k) {
        term *= m / (double(k) * double(k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

double j0_quadrature(double x) {
    static const GaussRule rule = make_rule();
    const double w = std::numbers::pi / kPanels;
    double sum = 0.0;
    for (int p = 0; p < kPanels; ++p) {
        const double a = p * w;
        for (int i = 0; i < kGaussOrder; ++i) {
            double theta = a + 0.5 * w * (rule.node[i] + 1.0);
            sum += 0.5 * w * rule.weight[i] * std::cos(x * std::sin(theta));
        }
    }
    return sum / std::numbers::pi;
}

}  // namespace

double bessel_j0(double x) {
    x = std::abs(x);
    return x <= 12.0 ? j0_series(x) : j0_quadrature(x);
}

}  // namespace pops
