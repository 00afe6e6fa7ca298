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
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "seirfit/logistic.hpp"

namespace seirfit {

/// The six population compartments at one instant, as absolute person
/// counts. The dynamics move people between compartments; the total stays
/// equal to the population size up to integration rounding.
struct CompartmentState {
    double susceptible = 0.0;
    double exposed = 0.0;
    double infected = 0.0;
    double critical = 0.0;
    double recovered = 0.0;
    double dead = 0.0;

    double total() const
    {
        return susceptible + exposed + infected + critical + recovered + dead;
    }

    bool all_finite() const
    {
        return std::isfinite(susceptible) && std::isfinite(exposed) && std::isfinite(infected) &&
               std::isfinite(critical) && std::isfinite(recovered) && std::isfinite(dead);
    }

    std::array<double, 6> to_array() const
    {
        return {susceptible, exposed, infected, critical, recovered, dead};
    }

    static CompartmentState from_array(const std::array<double, 6>& a)
    {
        return {a[0], a[1], a[2], a[3], a[4], a[5]};
    }
};

/// One epidemic wave window: the reproduction number is held high over
/// [start_day, start_day + duration_days] and low outside it.
struct WaveWindow {
    double start_day = 0.0;     // a_i
    double duration_days = 0.0; // b_i
};

/// Parameters of the smooth rectangular-pulse reproduction number. Each
/// wave contributes a pulse that rises near its start day and falls after
/// its duration; the total is the literal sum over waves, so the off-pulse
/// baseline is n_waves * r0_end.
struct RectangleR0Params {
    double r0_start = 3.0;
    double r0_end = 0.9;
    double smoothness_k = 2.5; // 1/day^2
    std::vector<WaveWindow> waves;

    void validate() const
    {
        if (waves.empty()) {
            throw std::invalid_argument("rectangle R0 needs at least one wave");
        }
        // r0_start == r0_end is the degenerate flat (e.g. zero-transmission)
        // configuration; r0_start < r0_end produces an inverted pulse, which
        // the fitter may explore since the calibration boxes overlap.
        if (!(r0_start >= 0.0) || !(r0_end >= 0.0)) {
            throw std::invalid_argument("rectangle R0 requires r0_start >= 0 and r0_end >= 0");
        }
        if (!(smoothness_k > 0.0)) {
            throw std::invalid_argument("rectangle R0 requires k > 0");
        }
        for (const auto& w : waves) {
            if (!(w.duration_days > 0.0)) {
                throw std::invalid_argument("wave duration must be positive");
            }
        }
    }
};

/// Parameters of the single-step logistic reproduction number, an
/// alternate R0 shape with one inflection point at t0.
struct LogisticR0Params {
    double r0_start = 3.0;
    double r0_end = 0.9;
    double steepness_k = 1.0; // 1/day
    double inflection_t0 = 0.0;

    void validate() const
    {
        if (!(r0_start > r0_end) || !(r0_end >= 0.0)) {
            throw std::invalid_argument("logistic R0 requires r0_start > r0_end >= 0");
        }
        if (!(steepness_k > 0.0)) {
            throw std::invalid_argument("logistic R0 requires k > 0");
        }
    }
};

/// Model constants that are not fitted. Stage durations are in days; sigma
/// and gamma are per-day rates. reinfection_fraction routes that share of
/// the recovery flow back to Susceptible.
struct FixedRates {
    double sigma = 1.0 / 5.0;  // incubation-exit rate, 1/day
    double gamma = 1.0 / 9.0;  // recovery rate, 1/day
    double days_i_to_c = 12.0; // infected -> critical stage duration
    double days_c_to_d = 7.5;  // critical -> dead stage duration
    double days_c_to_r = 6.5;  // critical -> recovered stage duration
    double reinfection_fraction = 0.01; // Rsus, dimensionless in [0,1]
    int immunity_lag_days = 30;

    void validate() const
    {
        if (!(sigma > 0.0) || !(gamma > 0.0) || !(days_i_to_c > 0.0) || !(days_c_to_d > 0.0) ||
            !(days_c_to_r > 0.0)) {
            throw std::invalid_argument("all rates and stage durations must be positive");
        }
        if (!(reinfection_fraction >= 0.0 && reinfection_fraction <= 1.0)) {
            throw std::invalid_argument("reinfection fraction must lie in [0,1]");
        }
    }
};

/// The ten fitted quantities: the rectangle R0 shape (r0_start, r0_end, k
/// and the wave windows), the two branching probabilities, and the ICU bed
/// growth rate.
struct FitParameters {
    RectangleR0Params r0_params;
    double prob_i_to_c = 0.05; // probability infected becomes critical
    double prob_c_to_d = 0.5;  // probability critical dies
    double bed_growth_s = 0.003; // 1/day
};

struct PopulationConfig {
    double n = 0.0;      // total population
    double beds_0 = 0.0; // baseline ICU bed count

    /// Default baseline: 5 ICU beds per 100k population.
    static double default_beds(double n) { return n * 5.0 / 100000.0; }

    void validate() const
    {
        if (!(n > 0.0)) {
            throw std::invalid_argument("population must be positive");
        }
        if (!(beds_0 >= 0.0)) {
            throw std::invalid_argument("bed count must be non-negative");
        }
    }
};

/// Daily vaccination dose counts plus the immunity lag. The effective
/// immunization rate at day t is the dose count lag_days earlier; zero
/// outside the recorded range.
struct VaccinationSchedule {
    long start_day = 0; // day offset of daily_doses[0] on the simulation clock
    std::vector<double> daily_doses;
    int lag_days = 30;

    static VaccinationSchedule none() { return {}; }

    double effective_rate(double t) const
    {
        if (daily_doses.empty()) {
            return 0.0;
        }
        const long day = static_cast<long>(std::floor(t));
        const long idx = day - lag_days - start_day;
        if (idx < 0 || idx >= static_cast<long>(daily_doses.size())) {
            return 0.0;
        }
        return daily_doses[static_cast<std::size_t>(idx)];
    }

    double total_doses() const
    {
        double s = 0.0;
        for (double d : daily_doses) {
            s += d;
        }
        return s;
    }
};

/// Compartment flow rates plus the intermediates the equations share: the
/// pre-split recovery flow (recovery_flow) and the transmission rate beta.
/// The six compartment rates sum to zero up to floating rounding.
struct DerivativeVector {
    double ds = 0.0;
    double de = 0.0;
    double di = 0.0;
    double dc = 0.0;
    double dr = 0.0;
    double dd = 0.0;
    double recovery_flow = 0.0; // persons/day, includes vaccination
    double beta = 0.0;          // 1/day

    double sum() const { return ds + de + di + dc + dr + dd; }

    std::array<double, 6> to_array() const { return {ds, de, di, dc, dr, dd}; }
};

/// Multi-wave rectangular-pulse reproduction number. Each wave i adds
///   (r0_start - r0_end) * sigmoid(-k * (a_i - t) * (a_i + b_i - t)) + r0_end
/// which is high for t inside [a_i, a_i + b_i] and low outside. Total
/// function: finite for all finite t.
inline double r0_rectangle(double t, const RectangleR0Params& p)
{
    double total = 0.0;
    for (const auto& w : p.waves) {
        const double x = -p.smoothness_k * (w.start_day - t) * (w.start_day + w.duration_days - t);
        total += (p.r0_start - p.r0_end) * stable_logistic(x) + p.r0_end;
    }
    return total;
}

/// Single smooth step: r0_start for t well below t0, r0_end well above,
/// the midpoint value exactly at t = t0.
inline double r0_logistic(double t, const LogisticR0Params& p)
{
    return (p.r0_start - p.r0_end) * stable_logistic(p.steepness_k * (p.inflection_t0 - t)) +
           p.r0_end;
}

/// ICU capacity over time: beds_0 * (1 + s*t). A zero baseline stays zero.
inline double beds_at(double t, const PopulationConfig& pop, double growth_s)
{
    return std::max(0.0, pop.beds_0 * (1.0 + growth_s * t));
}

/// Right-hand side of the modified SEIR system: rectangle R0 transmission,
/// critical-care saturation against the bed supply, vaccination as a direct
/// S -> R transfer (clamped so it never drives S negative), and a fixed
/// fraction of the recovery flow routed back to S as reinfections.
inline DerivativeVector derivatives(double t, const CompartmentState& y,
                                    const FitParameters& fit, const FixedRates& rates,
                                    const PopulationConfig& pop, double v_rate)
{
    if (!y.all_finite()) {
        throw std::invalid_argument("non-finite compartment state");
    }
    if (!(pop.n > 0.0)) {
        throw std::invalid_argument("population must be positive");
    }

    const double r0 = r0_rectangle(t, fit.r0_params);
    const double beta = rates.gamma * r0;
    const double beds = beds_at(t, pop, fit.bed_growth_s);

    const double v_eff = std::min(v_rate, std::max(y.susceptible, 0.0));
    const double treated = std::min(beds, y.critical);
    const double overflow = std::max(0.0, y.critical - beds);

    const double infection = beta * y.infected * y.susceptible / pop.n;
    const double recover_from_i = rates.gamma * (1.0 - fit.prob_i_to_c) * y.infected;
    const double recover_from_c = (1.0 - fit.prob_c_to_d) / rates.days_c_to_r * treated;
    const double worsen = fit.prob_i_to_c / rates.days_i_to_c * y.infected;
    const double die_treated = fit.prob_c_to_d / rates.days_c_to_d * treated;

    DerivativeVector out;
    out.beta = beta;
    out.recovery_flow = recover_from_i + recover_from_c + v_eff;
    out.ds = -infection - v_eff + rates.reinfection_fraction * out.recovery_flow;
    out.de = infection - rates.sigma * y.exposed;
    out.di = rates.sigma * y.exposed - worsen - recover_from_i;
    out.dc = worsen - die_treated - overflow - recover_from_c;
    out.dr = (1.0 - rates.reinfection_fraction) * out.recovery_flow;
    out.dd = die_treated + overflow;
    return out;
}

} // namespace seirfit
