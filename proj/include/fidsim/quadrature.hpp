#pragma once

#include <functional>

namespace fidsim {

// Adaptive Simpson on [a, b] to absolute tolerance abs_tol. The interval
// is pre-split into panels no wider than max_panel so oscillatory
// integrands are resolved before the error estimate is trusted.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, double max_panel = 0.0);

} // namespace fidsim
