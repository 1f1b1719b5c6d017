#include "fidsim/stats.hpp"

#include <algorithm>
#include <cmath>

#include "fidsim/errors.hpp"

namespace fidsim {

double mean(const std::vector<double>& v) {
    if (v.empty()) throw InputError("mean of empty sample");
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
}

double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) throw InputError("sample std needs at least 2 values");
    double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (v.size() - 1));
}

double stderr_mean(const std::vector<double>& v) {
    return sample_std(v) / std::sqrt(static_cast<double>(v.size()));
}

double median(std::vector<double> v) {
    if (v.empty()) throw InputError("median of empty sample");
    size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
    return 0.5 * (v[mid - 1] + hi);
}

namespace {

double r2_of(const std::vector<double>& ys,
             const std::vector<double>& fitted) {
    double m = mean(ys);
    double ss_tot = 0.0, ss_res = 0.0;
    for (size_t i = 0; i < ys.size(); ++i) {
        ss_tot += (ys[i] - m) * (ys[i] - m);
        ss_res += (ys[i] - fitted[i]) * (ys[i] - fitted[i]);
    }
    if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
    return 1.0 - ss_res / ss_tot;
}

} // namespace

LinearFit fit_affine(const std::vector<double>& xs,
                     const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw InputError("affine fit needs >= 2 matched points");
    double mx = mean(xs), my = mean(ys);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw InputError("affine fit with degenerate x values");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    std::vector<double> fitted(xs.size());
    for (size_t i = 0; i < xs.size(); ++i)
        fitted[i] = f.intercept + f.slope * xs[i];
    f.r2 = r2_of(ys, fitted);
    return f;
}

LinearFit fit_through_origin(const std::vector<double>& xs,
                             const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.empty())
        throw InputError("fit needs matched non-empty points");
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    if (sxx == 0.0) throw InputError("fit with all-zero x values");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = 0.0;
    std::vector<double> fitted(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) fitted[i] = f.slope * xs[i];
    f.r2 = r2_of(ys, fitted);
    return f;
}

LinearFit fit_loglog(const std::vector<double>& xs,
                     const std::vector<double>& ys) {
    std::vector<double> lx, ly;
    lx.reserve(xs.size());
    ly.reserve(ys.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= 0.0 || ys[i] <= 0.0)
            throw InputError("log-log fit needs positive values");
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    return fit_affine(lx, ly);
}

WilsonInterval wilson(int successes, int trials, double z) {
    if (trials <= 0) throw InputError("Wilson interval needs trials > 0");
    if (successes < 0 || successes > trials)
        throw InputError("successes out of range");
    double n = trials;
    double p = successes / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    WilsonInterval w;
    w.lo = std::max(0.0, center - half);
    w.hi = std::min(1.0, center + half);
    return w;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw InputError("KS needs non-empty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        // consume whole tie blocks before comparing, else equal samples
        // would show a spurious gap
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        double fa = static_cast<double>(i) / a.size();
        double fb = static_cast<double>(j) / b.size();
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

} // namespace fidsim
