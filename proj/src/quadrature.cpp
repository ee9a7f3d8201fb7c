#include "rou/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace rou {

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[i] * sum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options) {
    if (a == b) return {0.0, 0.0, 0, true};
    if (b < a) {
        QuadratureResult r = integrate(f, b, a, options);
        r.value = -r.value;
        return r;
    }

    std::priority_queue<Panel> panels;
    Panel first = gauss_kronrod(f, a, b);
    panels.push(first);
    double value = first.value;
    double error = first.error;
    int count = 1;

    auto done = [&] { return error <= std::max(options.abs_tol, options.rel_tol * std::abs(value)); };
    while (!done() && count < options.max_panels) {
        const Panel worst = panels.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted
        panels.pop();
        const Panel left = gauss_kronrod(f, worst.a, mid);
        const Panel right = gauss_kronrod(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++count;
    }

    // Re-sum from the panels to shed the drift of the running updates.
    double total = 0.0;
    double total_error = 0.0;
    std::vector<Panel> all;
    all.reserve(panels.size());
    while (!panels.empty()) {
        all.push_back(panels.top());
        panels.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const Panel& p : all) {
        total += p.value;
        total_error += p.error;
    }
    return {total, total_error, count,
            total_error <= std::max(options.abs_tol, options.rel_tol * std::abs(total))};
}

}  // namespace rou

namespace rou {

QuadratureResult integrate_piecewise(const std::function<double(double)>& f,
                                     const std::vector<double>& breaks,
                                     const QuadratureOptions& options) {
    QuadratureResult total{0.0, 0.0, 0, true};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const QuadratureResult piece = integrate(f, breaks[i], breaks[i + 1], options);
        total.value += piece.value;
        total.error += piece.error;
        total.panels += piece.panels;
        total.converged = total.converged && piece.converged;
    }
    return total;
}

}  // namespace rou
