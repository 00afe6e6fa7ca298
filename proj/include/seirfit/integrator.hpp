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

#include <array>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seirfit/model.hpp"

namespace seirfit {

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(double t, const std::array<double, 6>& state)
        : std::runtime_error(describe(t, state)), t_(t), state_(state)
    {
    }

    double time() const { return t_; }
    const std::array<double, 6>& state() const { return state_; }

private:
    static std::string describe(double t, const std::array<double, 6>& s)
    {
        std::ostringstream os;
        os << "non-finite derivative at t=" << t << " with state [";
        for (std::size_t i = 0; i < s.size(); ++i) {
            os << (i ? ", " : "") << s[i];
        }
        os << "]";
        return os.str();
    }

    double t_;
    std::array<double, 6> state_;
};

/// One classic fourth-order Runge-Kutta step of size h for a fixed-size
/// state vector. f(t, y) returns dy/dt.
template <std::size_t N, typename F>
std::array<double, N> rk4_step(F&& f, double t, const std::array<double, N>& y, double h)
{
    const auto k1 = f(t, y);
    std::array<double, N> tmp;
    for (std::size_t i = 0; i < N; ++i) {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    const auto k2 = f(t + 0.5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    const auto k3 = f(t + 0.5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) {
        tmp[i] = y[i] + h * k3[i];
    }
    const auto k4 = f(t + h, tmp);
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

/// Simulation output on a uniform daily grid: states plus the derived
/// series the model exposes (R0(t), beta(t), bed supply, daily deaths as
/// the first difference of cumulative deaths).
struct Trajectory {
    std::vector<double> days; // uniform 1-day grid starting at t0
    std::vector<CompartmentState> states;
    std::vector<double> r0;
    std::vector<double> beta;
    std::vector<double> beds;
    std::vector<double> daily_deaths;

    std::size_t size() const { return days.size(); }

    std::vector<double> cumulative_deaths() const
    {
        std::vector<double> out(states.size());
        for (std::size_t i = 0; i < states.size(); ++i) {
            out[i] = states[i].dead;
        }
        return out;
    }
};

/// Fixed-step RK4 over [t0, t_end] with step 1/substeps_per_day, sampling
/// the state at every integer day. Deterministic: identical inputs give
/// bit-identical outputs. Throws IntegrationError if a step produces a
/// non-finite state. Derived series are left empty; simulate() fills them.
template <typename Rhs>
Trajectory integrate(Rhs&& rhs, const CompartmentState& y0, double t0, double t_end,
                     int substeps_per_day)
{
    if (t_end < t0) {
        throw std::invalid_argument("t_end must be >= t0");
    }
    if (substeps_per_day < 1) {
        throw std::invalid_argument("substeps_per_day must be >= 1");
    }
    const long n_days = static_cast<long>(std::llround(t_end - t0));
    const double h = 1.0 / substeps_per_day;

    Trajectory traj;
    traj.days.reserve(static_cast<std::size_t>(n_days) + 1);
    traj.states.reserve(static_cast<std::size_t>(n_days) + 1);

    // Diverging dynamics can overflow inside a step's intermediate stages,
    // before the post-step check runs. Classify that as an integration
    // failure rather than letting the model reject its input.
    auto f = [&rhs](double t, const std::array<double, 6>& y) {
        for (double v : y) {
            if (!std::isfinite(v)) {
                throw IntegrationError(t, y);
            }
        }
        return rhs(t, CompartmentState::from_array(y)).to_array();
    };

    std::array<double, 6> y = y0.to_array();
    traj.days.push_back(t0);
    traj.states.push_back(y0);

    for (long day = 0; day < n_days; ++day) {
        for (int s = 0; s < substeps_per_day; ++s) {
            const double t = t0 + static_cast<double>(day) + s * h;
            y = rk4_step(f, t, y, h);
            for (double v : y) {
                if (!std::isfinite(v)) {
                    throw IntegrationError(t, y);
                }
            }
        }
        traj.days.push_back(t0 + static_cast<double>(day + 1));
        traj.states.push_back(CompartmentState::from_array(y));
    }
    return traj;
}

struct SimulateOptions {
    int substeps_per_day = 4;
    double seed_exposed = -1.0; // < 0 means the default max(1, N/1e6)
    double t0 = 0.0;
};

inline CompartmentState default_initial_state(const PopulationConfig& pop, double seed_exposed)
{
    const double e0 = seed_exposed >= 0.0 ? seed_exposed : std::max(1.0, pop.n / 1.0e6);
    CompartmentState y0;
    y0.exposed = e0;
    y0.susceptible = pop.n - e0;
    return y0;
}

/// Full model simulation over horizon_days from the default (or supplied)
/// initial state, with the vaccination rate held piecewise constant per
/// day. Fills the derived series.
inline Trajectory simulate(const FitParameters& fit, const FixedRates& rates,
                           const PopulationConfig& pop, const VaccinationSchedule& vacc,
                           long horizon_days, const SimulateOptions& opts = {},
                           const CompartmentState* y0 = nullptr)
{
    if (horizon_days < 1) {
        throw std::invalid_argument("horizon_days must be >= 1");
    }
    fit.r0_params.validate();
    rates.validate();
    pop.validate();

    const CompartmentState init = y0 ? *y0 : default_initial_state(pop, opts.seed_exposed);

    auto rhs = [&](double t, const CompartmentState& y) {
        return derivatives(t, y, fit, rates, pop, vacc.effective_rate(t));
    };
    Trajectory traj = integrate(rhs, init, opts.t0, opts.t0 + static_cast<double>(horizon_days),
                                opts.substeps_per_day);

    const std::size_t n = traj.size();
    traj.r0.resize(n);
    traj.beta.resize(n);
    traj.beds.resize(n);
    traj.daily_deaths.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        traj.r0[i] = r0_rectangle(traj.days[i], fit.r0_params);
        traj.beta[i] = rates.gamma * traj.r0[i];
        traj.beds[i] = beds_at(traj.days[i], pop, fit.bed_growth_s);
        traj.daily_deaths[i] =
            i == 0 ? traj.states[0].dead : traj.states[i].dead - traj.states[i - 1].dead;
    }
    return traj;
}

} // namespace seirfit
