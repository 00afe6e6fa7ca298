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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "seirfit/dates.hpp"
#include "seirfit/integrator.hpp"
#include "seirfit/logistic.hpp"
#include "seirfit/metrics.hpp"
#include "seirfit/model.hpp"

namespace seirfit {

/// One fittable parameter: box bounds, starting point, and whether the
/// optimizer may move it.
struct ParamSpec {
    std::string name;
    double initial_value = 0.0;
    double min = 0.0;
    double max = 0.0;
    bool vary = true;

    void validate() const
    {
        if (!(min < max)) {
            throw std::invalid_argument("parameter '" + name + "': min must be < max");
        }
        if (!(initial_value >= min && initial_value <= max)) {
            throw std::invalid_argument("parameter '" + name + "': initial value outside bounds");
        }
    }
};

/// Maps a bounded value p in [min, max] to the unconstrained real line via
/// the logit. Boundary values are nudged into the interior by
/// 1e-12*(max-min) so the transform stays finite.
inline double to_unbounded(double p, double min, double max)
{
    if (!(min < max)) {
        throw std::invalid_argument("to_unbounded: min must be < max");
    }
    if (p < min || p > max) {
        throw std::invalid_argument("to_unbounded: value outside [min, max]");
    }
    const double eps = 1e-12 * (max - min);
    const double clamped = std::clamp(p, min + eps, max - eps);
    return logit((clamped - min) / (max - min));
}

/// Inverse map: min + (max-min)*sigmoid(u). Total over all finite u.
inline double from_unbounded(double u, double min, double max)
{
    return min + (max - min) * stable_logistic(u);
}

struct FitOptions {
    double fd_relative_step = 1e-4; // forward-difference step, relative to |u|
    double fd_absolute_floor = 1e-6;
    double ftol = 1e-8; // relative cost-decrease termination
    double gtol = 1e-8; // gradient infinity-norm termination
    int max_evals_per_vary = 200;
    double lambda_init_factor = 1e-3; // initial damping, relative to max diag(J'J)
    double xtol = 1e-12; // step-size termination, relative to |u|
    // Step control in the unbounded coordinates. The logit transform
    // saturates for large |u| (zero gradient at the box edge), so steps are
    // capped and iterates clamped to keep every parameter responsive.
    double max_step = 2.0;
    double u_limit = 15.0;
    std::function<void(double)> on_accept; // observes the accepted-step cost sequence
};

struct FitResult {
    std::vector<std::string> names;
    std::vector<double> values; // final bounded values, spec order
    double chi_square = 0.0;
    double reduced_chi_square = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    std::size_t n_data = 0;
    std::size_t n_varys = 0;
    int n_function_evals = 0;
    std::string convergence_status;
    FitOptions options;

    double value(const std::string& name) const
    {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) {
                return values[i];
            }
        }
        throw std::out_of_range("no fitted parameter named '" + name + "'");
    }
};

using ResidualFn = std::function<std::vector<double>(const std::vector<double>&)>;

/// Levenberg-Marquardt least squares over the logit-transformed varying
/// parameters. The residual function receives the full bounded parameter
/// vector in spec order, fixed entries included, so every evaluated point
/// lies strictly inside its box. Jacobian by forward differences in the
/// unbounded coordinates. Throws if the initial cost is non-finite; an
/// exhausted evaluation budget is reported through convergence_status.
inline FitResult fit_least_squares(const ResidualFn& residual_fn,
                                   const std::vector<ParamSpec>& specs,
                                   const FitOptions& opts = {})
{
    if (specs.empty()) {
        throw std::invalid_argument("fit_least_squares: no parameters");
    }
    for (const auto& s : specs) {
        s.validate();
    }

    const std::size_t n_params = specs.size();
    std::vector<std::size_t> vary_idx;
    for (std::size_t i = 0; i < n_params; ++i) {
        if (specs[i].vary) {
            vary_idx.push_back(i);
        }
    }
    const std::size_t m = vary_idx.size();
    if (m == 0) {
        throw std::invalid_argument("fit_least_squares: no varying parameters");
    }

    std::vector<double> bounded(n_params);
    for (std::size_t i = 0; i < n_params; ++i) {
        bounded[i] = specs[i].initial_value;
    }
    Eigen::VectorXd u(m);
    for (std::size_t j = 0; j < m; ++j) {
        const auto& s = specs[vary_idx[j]];
        u[static_cast<Eigen::Index>(j)] = to_unbounded(s.initial_value, s.min, s.max);
    }

    int nfev = 0;
    auto eval = [&](const Eigen::VectorXd& uu) -> Eigen::VectorXd {
        for (std::size_t j = 0; j < m; ++j) {
            const auto& s = specs[vary_idx[j]];
            bounded[vary_idx[j]] = from_unbounded(uu[static_cast<Eigen::Index>(j)], s.min, s.max);
        }
        const std::vector<double> r = residual_fn(bounded);
        ++nfev;
        return Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
    };

    Eigen::VectorXd r = eval(u);
    const std::size_t n_data = static_cast<std::size_t>(r.size());
    double cost = r.squaredNorm();
    if (!std::isfinite(cost)) {
        throw std::runtime_error("fit_least_squares: non-finite cost at the initial point");
    }

    const int max_evals = opts.max_evals_per_vary * static_cast<int>(m);
    std::string status;
    double lambda = -1.0; // set from the first Jacobian
    double nu = 2.0;      // rejection growth factor (doubles on each rejection)

    while (status.empty()) {
        if (cost == 0.0) {
            status = "converged: zero cost";
            break;
        }
        if (nfev >= max_evals) {
            status = "evaluation budget exhausted";
            break;
        }

        // Forward-difference Jacobian in the unbounded coordinates.
        Eigen::MatrixXd jac(static_cast<Eigen::Index>(n_data), static_cast<Eigen::Index>(m));
        bool jac_ok = true;
        for (std::size_t j = 0; j < m && jac_ok; ++j) {
            const Eigen::Index jj = static_cast<Eigen::Index>(j);
            const double step =
                std::max(std::abs(u[jj]) * opts.fd_relative_step, opts.fd_absolute_floor);
            Eigen::VectorXd up = u;
            up[jj] += step;
            const Eigen::VectorXd rp = eval(up);
            jac.col(jj) = (rp - r) / step;
            if (!jac.col(jj).allFinite()) {
                jac_ok = false;
            }
        }
        if (!jac_ok) {
            status = "aborted: non-finite Jacobian";
            break;
        }

        const Eigen::VectorXd grad = jac.transpose() * r;
        if (grad.lpNorm<Eigen::Infinity>() < opts.gtol) {
            status = "converged: gradient tolerance";
            break;
        }

        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        // Identity damping: the logit coordinates are already comparably
        // scaled, and diag(J'J) scaling would under-damp weakly determined
        // directions.
        if (lambda < 0.0) {
            lambda = opts.lambda_init_factor * jtj.diagonal().maxCoeff();
        }

        bool accepted = false;
        while (!accepted) {
            Eigen::MatrixXd a = jtj;
            a.diagonal().array() += lambda;
            Eigen::VectorXd delta = a.ldlt().solve(-grad);
            const double step_norm = delta.lpNorm<Eigen::Infinity>();
            const bool capped = step_norm > opts.max_step;
            if (capped) {
                delta *= opts.max_step / step_norm;
            }

            if (nfev >= max_evals) {
                status = "evaluation budget exhausted";
                break;
            }
            if (delta.norm() <= opts.xtol * (u.norm() + opts.xtol)) {
                // Damping has shrunk the step below resolution.
                status = "converged: step tolerance";
                break;
            }
            Eigen::VectorXd u_trial = u + delta;
            u_trial = u_trial.cwiseMax(-opts.u_limit).cwiseMin(opts.u_limit);
            const Eigen::VectorXd r_trial = eval(u_trial);
            const double cost_trial = r_trial.squaredNorm();

            // Predicted decrease of the quadratic model at the actual
            // (possibly capped/clamped) step.
            const Eigen::VectorXd step_taken = u_trial - u;
            const double predicted =
                -(grad.dot(step_taken) + 0.5 * step_taken.dot(jtj * step_taken));

            if (std::isfinite(cost_trial) && cost_trial < cost) {
                const double actual = cost - cost_trial;
                const double rho = predicted > 0.0 ? actual / predicted : 1.0;
                const double decrease = actual / cost;
                u = u_trial;
                r = r_trial;
                cost = cost_trial;
                // Nielsen damping update: shrink by the gain ratio.
                const double shrink = 1.0 - std::pow(2.0 * rho - 1.0, 3);
                lambda = std::max(lambda * std::max(1.0 / 3.0, shrink), 1e-14);
                nu = 2.0;
                accepted = true;
                if (opts.on_accept) {
                    opts.on_accept(cost);
                }
                // Converged when both the achieved and the model-predicted
                // decrease are negligible. A capped step underestimates the
                // achievable decrease, so the test only applies to full steps.
                if (!capped && decrease < opts.ftol && predicted < opts.ftol * cost) {
                    status = "converged: cost tolerance";
                }
            } else {
                lambda *= nu;
                nu *= 2.0;
            }
        }
    }

    // Final bounded values from the last accepted point.
    for (std::size_t j = 0; j < m; ++j) {
        const auto& s = specs[vary_idx[j]];
        bounded[vary_idx[j]] = from_unbounded(u[static_cast<Eigen::Index>(j)], s.min, s.max);
    }

    FitResult res;
    res.options = opts;
    for (const auto& s : specs) {
        res.names.push_back(s.name);
    }
    res.values = bounded;
    res.chi_square = cost;
    res.n_data = n_data;
    res.n_varys = m;
    res.n_function_evals = nfev;
    res.reduced_chi_square =
        n_data > m ? cost / static_cast<double>(n_data - m) : std::numeric_limits<double>::quiet_NaN();
    res.aic = aic(n_data, cost, m);
    res.bic = bic(n_data, cost, m);
    res.convergence_status = status;
    return res;
}

// ---------------------------------------------------------------------------
// SEIR-specific calibration glue.
// ---------------------------------------------------------------------------

enum class SeriesKind { cumulative_deaths, daily_deaths, cumulative_confirmed };

inline std::string to_string(SeriesKind k)
{
    switch (k) {
    case SeriesKind::cumulative_deaths:
        return "cumulative_deaths";
    case SeriesKind::daily_deaths:
        return "daily_deaths";
    case SeriesKind::cumulative_confirmed:
        return "cumulative_confirmed";
    }
    throw std::logic_error("unknown series kind");
}

inline SeriesKind series_kind_from_string(const std::string& s)
{
    if (s == "cumulative_deaths") {
        return SeriesKind::cumulative_deaths;
    }
    if (s == "daily_deaths") {
        return SeriesKind::daily_deaths;
    }
    if (s == "cumulative_confirmed") {
        return SeriesKind::cumulative_confirmed;
    }
    throw std::invalid_argument("unknown series kind: '" + s + "'");
}

/// A daily-indexed observed target series anchored at a start date.
struct ObservedSeries {
    Date start_date{};
    std::vector<double> values;
    SeriesKind kind = SeriesKind::cumulative_deaths;
};

/// Everything the residual function needs besides the fitted parameters.
struct ModelContext {
    FixedRates rates;
    PopulationConfig pop;
    VaccinationSchedule vaccination;
    SimulateOptions sim;
};

/// The default 10-parameter calibration schema: rectangle R0 shape for two
/// waves, the two branching probabilities, and the bed growth rate.
inline std::vector<ParamSpec> default_param_specs()
{
    return {
        {"r0_start", 3.0, 2.0, 5.0, true},
        {"k", 2.5, 0.01, 5.0, true},
        {"a1", 90.0, 0.0, 350.0, true},
        {"b1", 90.0, 0.0, 350.0, true},
        {"a2", 90.0, 0.0, 350.0, true},
        {"b2", 90.0, 0.0, 350.0, true},
        {"r0_end", 0.9, 0.3, 3.5, true},
        {"prob_i_to_c", 0.05, 0.01, 0.1, true},
        {"prob_c_to_d", 0.5, 0.05, 0.8, true},
        {"s", 0.003, 1.0e-3, 0.01, true},
    };
}

/// Builds FitParameters from named scalars in spec order. Wave windows are
/// read from consecutive (a<i>, b<i>) pairs, so any wave count works.
inline FitParameters params_from_named(const std::vector<std::string>& names,
                                       const std::vector<double>& values)
{
    if (names.size() != values.size()) {
        throw std::invalid_argument("params_from_named: name/value size mismatch");
    }
    FitParameters fit;
    std::vector<std::pair<int, double>> starts, durations;
    bool have_r0_start = false, have_r0_end = false, have_k = false;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::string& n = names[i];
        const double v = values[i];
        if (n == "r0_start") {
            fit.r0_params.r0_start = v;
            have_r0_start = true;
        } else if (n == "r0_end") {
            fit.r0_params.r0_end = v;
            have_r0_end = true;
        } else if (n == "k") {
            fit.r0_params.smoothness_k = v;
            have_k = true;
        } else if (n == "prob_i_to_c") {
            fit.prob_i_to_c = v;
        } else if (n == "prob_c_to_d") {
            fit.prob_c_to_d = v;
        } else if (n == "s") {
            fit.bed_growth_s = v;
        } else if (n.size() >= 2 && n[0] == 'a') {
            starts.emplace_back(std::stoi(n.substr(1)), v);
        } else if (n.size() >= 2 && n[0] == 'b') {
            durations.emplace_back(std::stoi(n.substr(1)), v);
        } else {
            throw std::invalid_argument("unknown parameter name: '" + n + "'");
        }
    }
    if (!have_r0_start || !have_r0_end || !have_k) {
        throw std::invalid_argument("parameter set must include r0_start, r0_end and k");
    }
    if (starts.size() != durations.size() || starts.empty()) {
        throw std::invalid_argument("wave starts and durations must pair up");
    }
    std::sort(starts.begin(), starts.end());
    std::sort(durations.begin(), durations.end());
    for (std::size_t i = 0; i < starts.size(); ++i) {
        if (starts[i].first != durations[i].first) {
            throw std::invalid_argument("mismatched wave indices in a_i/b_i parameters");
        }
        fit.r0_params.waves.push_back({starts[i].second, durations[i].second});
    }
    return fit;
}

/// Simulates and samples the requested series on days 0..n_days-1.
inline std::vector<double> model_series(const FitParameters& fit, const ModelContext& ctx,
                                        SeriesKind kind, std::size_t n_days)
{
    if (n_days == 0) {
        throw std::invalid_argument("model_series: empty horizon");
    }
    const Trajectory traj =
        simulate(fit, ctx.rates, ctx.pop, ctx.vaccination, static_cast<long>(n_days - 1 > 0 ? n_days - 1 : 1),
                 ctx.sim);
    std::vector<double> out(n_days);
    for (std::size_t k = 0; k < n_days; ++k) {
        const std::size_t idx = std::min(k, traj.size() - 1);
        switch (kind) {
        case SeriesKind::cumulative_deaths:
            out[k] = traj.states[idx].dead;
            break;
        case SeriesKind::daily_deaths:
            out[k] = traj.daily_deaths[idx];
            break;
        case SeriesKind::cumulative_confirmed:
            // Everyone who has entered the infectious stage and beyond.
            out[k] = traj.states[idx].infected + traj.states[idx].critical +
                     traj.states[idx].recovered + traj.states[idx].dead;
            break;
        }
    }
    return out;
}

/// Unweighted residuals model - observed, sampled on the observed days.
inline std::vector<double> residuals(const FitParameters& fit, const ObservedSeries& observed,
                                     const ModelContext& ctx)
{
    if (observed.values.empty()) {
        throw std::invalid_argument("residuals: empty observed series");
    }
    const std::vector<double> model = model_series(fit, ctx, observed.kind, observed.values.size());
    std::vector<double> res(observed.values.size());
    for (std::size_t k = 0; k < res.size(); ++k) {
        res[k] = model[k] - observed.values[k];
    }
    return res;
}

/// Full calibration: Levenberg-Marquardt over the spec'd parameters against
/// the observed series.
inline FitResult fit_seir(const std::vector<ParamSpec>& specs, const ObservedSeries& observed,
                          const ModelContext& ctx, const FitOptions& opts = {})
{
    std::vector<std::string> names;
    for (const auto& s : specs) {
        names.push_back(s.name);
    }
    auto residual_fn = [&](const std::vector<double>& values) {
        const FitParameters fit = params_from_named(names, values);
        return residuals(fit, observed, ctx);
    };
    return fit_least_squares(residual_fn, specs, opts);
}

} // namespace seirfit
