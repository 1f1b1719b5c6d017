#include "fidsim/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "fidsim/errors.hpp"

namespace fidsim {

namespace {

double simpson_recurse(const std::function<double(double)>& f, double a,
                       double b, double fa, double fm, double fb, double whole,
                       double tol, double hard_tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || depth >= 48) {
        // at the depth cap judge the committed error against the overall
        // budget, not the halved node tolerance: a jump discontinuity
        // contributes ~|jump| h here and must be accepted, a divergent
        // integrand keeps delta O(1) and must not
        if (depth >= 48 && std::abs(delta) / 15.0 > 0.01 * hard_tol)
            throw NumericalError("adaptive quadrature failed to converge");
        return left + right + delta / 15.0;
    }
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, hard_tol,
                           depth + 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, hard_tol,
                           depth + 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, double max_panel) {
    if (b <= a) return 0.0;
    double width = b - a;
    int panels = 1;
    if (max_panel > 0.0)
        panels = std::max(1, static_cast<int>(std::ceil(width / max_panel)));
    double h = width / panels;
    double total = 0.0;
    double tol_per = abs_tol / panels;
    for (int p = 0; p < panels; ++p) {
        double x0 = a + p * h;
        double x1 = (p + 1 == panels) ? b : x0 + h;
        double xm = 0.5 * (x0 + x1);
        double f0 = f(x0), fm = f(xm), f1 = f(x1);
        double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total +=
            simpson_recurse(f, x0, x1, f0, fm, f1, whole, tol_per, abs_tol, 0);
    }
    return total;
}

} // namespace fidsim
