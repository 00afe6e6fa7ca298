/* Copyright 2026 seirfit contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace seirfit {

/// AIC under the least-squares convention: n*ln(chi2/n) + 2k.
/// A zero chi-square returns -infinity.
inline double aic(std::size_t n_data, double chi_square, std::size_t n_varys)
{
    if (n_data == 0) {
        throw std::invalid_argument("aic: n_data must be positive");
    }
    if (chi_square < 0.0) {
        throw std::invalid_argument("aic: chi_square must be non-negative");
    }
    if (chi_square == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    const double n = static_cast<double>(n_data);
    return n * std::log(chi_square / n) + 2.0 * static_cast<double>(n_varys);
}

/// BIC under the same convention: n*ln(chi2/n) + ln(n)*k.
inline double bic(std::size_t n_data, double chi_square, std::size_t n_varys)
{
    if (n_data == 0) {
        throw std::invalid_argument("bic: n_data must be positive");
    }
    if (chi_square < 0.0) {
        throw std::invalid_argument("bic: chi_square must be non-negative");
    }
    if (chi_square == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    const double n = static_cast<double>(n_data);
    return n * std::log(chi_square / n) + std::log(n) * static_cast<double>(n_varys);
}

/// The ten-entry evaluation suite for an (observed, predicted) pair.
struct MetricsReport {
    double r2 = 0.0;
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    double explained_variance = 0.0;
    double max_error = 0.0;
    double msle = 0.0;
    double median_absolute_error = 0.0;
    double median_absolute_percentage_error = 0.0;
    double aic = 0.0;

    /// Fixed (name, value) ordering used by the JSON and CSV emitters.
    std::vector<std::pair<std::string, double>> entries() const
    {
        return {{"r2", r2},
                {"mae", mae},
                {"mse", mse},
                {"rmse", rmse},
                {"explained_variance", explained_variance},
                {"max_error", max_error},
                {"msle", msle},
                {"median_absolute_error", median_absolute_error},
                {"median_absolute_percentage_error", median_absolute_percentage_error},
                {"aic", aic}};
    }
};

namespace detail {

inline double median(std::vector<double> v)
{
    if (v.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) {
        return hi;
    }
    double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

} // namespace detail

/// Computes all ten metrics. Requires equal lengths >= 2; the squared-log
/// error requires every value > -1. Percentage errors exclude points where
/// the true value is exactly zero.
inline MetricsReport evaluate(std::span<const double> y_true, std::span<const double> y_pred,
                              std::size_t n_varys)
{
    if (y_true.size() != y_pred.size()) {
        throw std::invalid_argument("evaluate: series lengths differ (" +
                                    std::to_string(y_true.size()) + " vs " +
                                    std::to_string(y_pred.size()) + ")");
    }
    const std::size_t n = y_true.size();
    if (n < 2) {
        throw std::invalid_argument("evaluate: need at least 2 points");
    }

    double mean_true = 0.0;
    for (double v : y_true) {
        mean_true += v;
    }
    mean_true /= static_cast<double>(n);

    double ss_res = 0.0, ss_tot = 0.0, abs_sum = 0.0, max_err = 0.0;
    double res_sum = 0.0;
    std::vector<double> abs_errors(n);
    std::vector<double> pct_errors;
    pct_errors.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y_true[i] - y_pred[i];
        ss_res += e * e;
        ss_tot += (y_true[i] - mean_true) * (y_true[i] - mean_true);
        abs_sum += std::abs(e);
        max_err = std::max(max_err, std::abs(e));
        res_sum += e;
        abs_errors[i] = std::abs(e);
        if (y_true[i] != 0.0) {
            pct_errors.push_back(std::abs(e) / std::abs(y_true[i]) * 100.0);
        }
    }

    // Var(residual) around its own mean, population convention.
    double res_mean = res_sum / static_cast<double>(n);
    double var_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y_true[i] - y_pred[i] - res_mean;
        var_res += e * e;
    }
    var_res /= static_cast<double>(n);
    const double var_true = ss_tot / static_cast<double>(n);

    double msle_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (y_true[i] <= -1.0 || y_pred[i] <= -1.0) {
            throw std::invalid_argument("evaluate: squared log error needs all values > -1");
        }
        const double dl = std::log1p(y_true[i]) - std::log1p(y_pred[i]);
        msle_sum += dl * dl;
    }

    MetricsReport rep;
    rep.mse = ss_res / static_cast<double>(n);
    rep.rmse = std::sqrt(rep.mse);
    rep.mae = abs_sum / static_cast<double>(n);
    rep.max_error = max_err;
    rep.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot
                          : (ss_res == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity());
    rep.explained_variance =
        var_true > 0.0 ? 1.0 - var_res / var_true
                       : (var_res == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity());
    rep.msle = msle_sum / static_cast<double>(n);
    rep.median_absolute_error = detail::median(std::move(abs_errors));
    rep.median_absolute_percentage_error = detail::median(std::move(pct_errors));
    rep.aic = aic(n, ss_res, n_varys);
    return rep;
}

} // namespace seirfit
