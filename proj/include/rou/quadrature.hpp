#pragma once

#include <functional>
#include <vector>

namespace rou {

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_panels = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // Gauss/Kronrod disagreement summed over panels
    int panels = 0;
    bool converged = false;
};

// Globally adaptive Gauss-Kronrod (7/15) integration over a finite [a, b]:
// the panel with the largest error estimate is bisected until the summed
// estimate drops below max(abs_tol, rel_tol * |value|). Node placement is
// fixed, so results are reproducible bit-for-bit.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

// Sum of integrate() over consecutive breakpoints, for integrands whose scale
// varies along the range. `breaks` must be sorted.
QuadratureResult integrate_piecewise(const std::function<double(double)>& f,
                                     const std::vector<double>& breaks,
                                     const QuadratureOptions& options = {});

}  // namespace rou
