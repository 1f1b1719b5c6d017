#pragma once

#include <vector>

namespace fidsim {

double mean(const std::vector<double>& v);
double sample_std(const std::vector<double>& v);  // unbiased, needs >= 2
double stderr_mean(const std::vector<double>& v); // sample_std / sqrt(n)
double median(std::vector<double> v);             // by value, reorders copy

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LinearFit fit_affine(const std::vector<double>& xs,
                     const std::vector<double>& ys);

// least squares slope of y = s*x; r2 against the mean of y
LinearFit fit_through_origin(const std::vector<double>& xs,
                             const std::vector<double>& ys);

// fits ln y = intercept + slope * ln x; all inputs must be positive
LinearFit fit_loglog(const std::vector<double>& xs,
                     const std::vector<double>& ys);

struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};

// Wilson score interval for a binomial proportion
WilsonInterval wilson(int successes, int trials, double z = 1.96);

// two-sample Kolmogorov-Smirnov statistic
double ks_statistic(std::vector<double> a, std::vector<double> b);

} // namespace fidsim
