/*
    Copyright (c) 2026 The limitlens Authors

    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#include "limitlens/lengthmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "limitlens/normal.hpp"

namespace limitlens {

double FitResult::curve(double length) const noexcept {
    return amplitude * lognormal_pdf(length, mu, sigma);
}

std::vector<double> smooth(std::span<const double> values, int window) {
    if (window < 1 || window % 2 == 0) {
        throw DomainError("smoothing window must be a positive odd integer");
    }
    std::vector<double> out(values.size(), 0.0);
    if (values.size() <= 1) {
        return out;
    }
    const std::ptrdiff_t half = window / 2;
    const std::ptrdiff_t first = 1;
    const auto last = static_cast<std::ptrdiff_t>(values.size()) - 1;
    for (std::ptrdiff_t i = first; i <= last; ++i) {
        const auto lo = std::max(first, i - half);
        const auto hi = std::min(last, i + half);
        double sum = 0.0;
        for (auto j = lo; j <= hi; ++j) {
            sum += values[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

std::vector<double> smooth_density(const LengthHistogram& h, int window) {
    return smooth(h.density(), window);
}

int find_cramming_threshold(std::span<const double> density, int limit) {
    if (limit < 10) {
        throw LimitTooSmall("cramming threshold needs a limit of at least 10, got " + std::to_string(limit));
    }
    if (density.size() < static_cast<std::size_t>(limit) + 1) {
        throw DomainError("density covers lengths up to " + std::to_string(density.size() - 1) +
                          " but the limit is " + std::to_string(limit));
    }
    for (int i = limit - 1; i >= limit / 2; --i) {
        const auto k = static_cast<std::size_t>(i);
        if (density[k] < density[k - 1] && density[k] <= density[k + 1]) {
            return i;
        }
    }
    return static_cast<int>(std::floor(0.9 * limit));
}

namespace {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct Problem {
    std::span<const double> density;
    int lo;
    int hi;  // exclusive

    // Sum of squared residuals at theta = (mu, ln sigma, A).
    [[nodiscard]] double cost(const Vec3& theta) const {
        const double sigma = std::exp(theta[1]);
        double sse = 0.0;
        for (int l = lo; l < hi; ++l) {
            const double r = density[static_cast<std::size_t>(l)] - theta[2] * lognormal_pdf(l, theta[0], sigma);
            sse += r * r;
        }
        return sse;
    }

    // Gauss-Newton pieces: H = J^T J and g = J^T r for residual r = d - A f.
    void normal_equations(const Vec3& theta, Mat3& h, Vec3& g) const {
        const double mu = theta[0];
        const double sigma = std::exp(theta[1]);
        const double amp = theta[2];
        h.setZero();
        g.setZero();
        for (int l = lo; l < hi; ++l) {
            const double z = (std::log(static_cast<double>(l)) - mu) / sigma;
            const double f = lognormal_pdf(l, mu, sigma);
            const double r = density[static_cast<std::size_t>(l)] - amp * f;
            const Vec3 j(-amp * f * z / sigma, -amp * f * (z * z - 1.0), -f);
            h.noalias() += j * j.transpose();
            g.noalias() += j * r;
        }
    }
};

FitResult make_result(const Vec3& theta, double sse, int lo, int threshold, int limit, int iterations) {
    FitResult r;
    r.mu = theta[0];
    r.sigma = std::exp(theta[1]);
    r.amplitude = theta[2];
    r.threshold = threshold;
    r.fit_lo = lo;
    r.fit_hi = threshold - 1;
    r.sse = sse;
    r.limit = limit;
    r.iterations = iterations;
    return r;
}

}  // namespace

FitResult fit_lognormal(std::span<const double> density, int fit_lo, int threshold, int limit, int max_iterations) {
    if (fit_lo < 1) {
        throw DomainError("fit lower bound must be >= 1");
    }
    if (threshold > limit) {
        throw DomainError("threshold " + std::to_string(threshold) + " exceeds limit " + std::to_string(limit));
    }
    if (threshold <= fit_lo) {
        throw FitError("empty fit range [" + std::to_string(fit_lo) + ", " + std::to_string(threshold) + ")");
    }
    if (density.size() < static_cast<std::size_t>(threshold)) {
        throw DomainError("density shorter than the fit range");
    }

    // Density-weighted moments of ln(length) over the fit range.
    double weight = 0.0;
    double mean_log = 0.0;
    int support = 0;
    for (int l = fit_lo; l < threshold; ++l) {
        const double w = density[static_cast<std::size_t>(l)];
        if (w > 0.0) {
            ++support;
            weight += w;
            mean_log += w * std::log(static_cast<double>(l));
        }
    }
    if (support == 0) {
        throw FitError("no positive density in the fit range");
    }
    mean_log /= weight;
    double var_log = 0.0;
    for (int l = fit_lo; l < threshold; ++l) {
        const double w = density[static_cast<std::size_t>(l)];
        if (w > 0.0) {
            const double dev = std::log(static_cast<double>(l)) - mean_log;
            var_log += w * dev * dev;
        }
    }
    var_log /= weight;
    if (support == 1 || !(var_log > 0.0)) {
        throw FitError("zero variance: all mass at a single length");
    }
    if (support < 10) {
        throw FitError("need at least 10 positive support points, have " + std::to_string(support));
    }

    double median = fit_lo;
    {
        double cum = 0.0;
        for (int l = fit_lo; l < threshold; ++l) {
            cum += std::max(0.0, density[static_cast<std::size_t>(l)]);
            if (cum >= 0.5 * weight) {
                median = l;
                break;
            }
        }
    }

    const Problem problem{density, fit_lo, threshold};
    Vec3 theta(std::log(median), 0.5 * std::log(var_log), 1.0);
    double cost = problem.cost(theta);
    double lambda = 1e-3;
    Mat3 h;
    Vec3 g;

    for (int iter = 1; iter <= max_iterations; ++iter) {
        problem.normal_equations(theta, h, g);
        bool accepted = false;
        Vec3 step = Vec3::Zero();
        while (!accepted) {
            Mat3 damped = h;
            for (int i = 0; i < 3; ++i) {
                damped(i, i) += lambda * std::max(h(i, i), 1e-300);
            }
            step = damped.ldlt().solve(-g);
            const Vec3 candidate = theta + step;
            const double candidate_cost = candidate.allFinite() ? problem.cost(candidate) : INFINITY;
            if (std::isfinite(candidate_cost) && candidate_cost <= cost) {
                const double previous = cost;
                theta = candidate;
                cost = candidate_cost;
                lambda = std::max(lambda * 0.1, 1e-12);
                accepted = true;
                const bool tiny_step = (step.array().abs() <= 1e-12 * (theta.array().abs() + 1e-9)).all();
                if (tiny_step || previous - cost <= 1e-16 * previous) {
                    return make_result(theta, cost, fit_lo, threshold, limit, iter);
                }
            } else {
                lambda *= 10.0;
                if (lambda > 1e12) {
                    // No descent direction left at working precision.
                    return make_result(theta, cost, fit_lo, threshold, limit, iter);
                }
            }
        }
    }
    throw FitError("no convergence after " + std::to_string(max_iterations) + " iterations",
                   make_result(theta, cost, fit_lo, threshold, limit, max_iterations));
}

double cramming_size(std::span<const double> density, const FitResult& fit) {
    double excess = 0.0;
    const int last = std::min(fit.limit, static_cast<int>(density.size()) - 1);
    for (int l = fit.threshold; l <= last; ++l) {
        excess += std::max(0.0, density[static_cast<std::size_t>(l)] - fit.curve(l));
    }
    return excess;
}

double runover(const FitResult& fit, double c) {
    if (!(c > 0.0)) {
        return 1.0;
    }
    return normal_sf((std::log(c) - fit.mu) / fit.sigma);
}

double solve_limit(const FitResult& fit, double target_runover) {
    if (!(target_runover > 0.0 && target_runover < 1.0)) {
        throw DomainError("target run-over must lie in (0, 1)");
    }
    // quantile(1 - r) == -quantile(r); the latter avoids rounding 1 - r.
    return std::exp(fit.mu - fit.sigma * normal_quantile(target_runover));
}

CramAnalysis analyze_histogram(const LengthHistogram& h, int limit, const ModelOptions& options) {
    if (h.max_len() < limit) {
        throw DomainError("histogram max_len " + std::to_string(h.max_len()) + " is below the limit " +
                          std::to_string(limit));
    }
    const auto density = h.density();
    const auto smoothed = smooth(density, options.smooth_window);
    const int threshold = find_cramming_threshold(smoothed, limit);
    CramAnalysis out;
    out.fit = fit_lognormal(density, options.fit_lo, threshold, limit, options.max_iterations);
    out.cramming = cramming_size(density, out.fit);
    return out;
}

}  // namespace limitlens
