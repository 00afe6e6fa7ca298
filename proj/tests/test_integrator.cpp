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
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <limits>

#include "seirfit/integrator.hpp"

using namespace seirfit;

namespace {

FitParameters two_wave_params()
{
    FitParameters p;
    p.r0_params.r0_start = 2.13470497;
    p.r0_params.r0_end = 0.45969314;
    p.r0_params.smoothness_k = 2.06340457;
    p.r0_params.waves = {{60.4533838, 146.800862}, {252.861166, 32.678741}};
    p.prob_i_to_c = 0.02359074;
    p.prob_c_to_d = 0.21900041;
    p.bed_growth_s = 0.00767634;
    return p;
}

PopulationConfig india_pop()
{
    const double n = 1.38e9;
    return {n, PopulationConfig::default_beds(n)};
}

// Local maxima above a relative prominence floor. A tiny transient bump
// from the exposed seed should not count as a wave.
std::vector<std::size_t> prominent_maxima(const std::vector<double>& v, double rel_floor)
{
    double peak = 0.0;
    for (double x : v) {
        peak = std::max(peak, x);
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] >= rel_floor * peak) {
            out.push_back(i);
        }
    }
    return out;
}

} // namespace

TEST_CASE("rk4 step leaves a constant solution unchanged")
{
    auto zero = [](double, const std::array<double, 3>& ) {
        return std::array<double, 3>{0.0, 0.0, 0.0};
    };
    const std::array<double, 3> y0{1.0, -2.0, 3.5};
    CHECK(rk4_step(zero, 0.0, y0, 0.25) == y0);
}

TEST_CASE("rk4 integrates exponential decay to 1e-9")
{
    // y' = -y over [0, 1] with 100 steps; compare against exp(-1).
    auto decay = [](double, const std::array<double, 1>& y) {
        return std::array<double, 1>{-y[0]};
    };
    std::array<double, 1> y{1.0};
    const double h = 0.01;
    for (int i = 0; i < 100; ++i) {
        y = rk4_step(decay, i * h, y, h);
    }
    CHECK_THAT(y[0], Catch::Matchers::WithinAbs(std::exp(-1.0), 1e-9));
}

TEST_CASE("rk4 is exact on cubic polynomials")
{
    // y' = 3t^2, y(0) = 0: the classic order-4 scheme reproduces t^3 up to
    // roundoff because the truncation term involves the fifth derivative.
    auto rhs = [](double t, const std::array<double, 1>&) {
        return std::array<double, 1>{3.0 * t * t};
    };
    std::array<double, 1> y{0.0};
    for (int i = 0; i < 10; ++i) {
        y = rk4_step(rhs, i * 0.1, y, 0.1);
    }
    CHECK_THAT(y[0], Catch::Matchers::WithinAbs(1.0, 1e-13));
}

TEST_CASE("integrator shows fourth-order convergence on smooth dynamics")
{
    // Keep the hospital capacity far above any plausible load so the
    // right-hand side has no min/max kinks on the trajectory.
    FitParameters p = two_wave_params();
    PopulationConfig pop{1.0e6, 1.0e9};

    // A 60-day horizon keeps the halved-step errors well above the roundoff
    // floor while the coarse step is already in the asymptotic regime.
    auto run = [&](int substeps) {
        SimulateOptions opts;
        opts.substeps_per_day = substeps;
        return simulate(p, FixedRates{}, pop, VaccinationSchedule::none(), 60, opts);
    };
    const Trajectory ref = run(512);
    auto err = [&](const Trajectory& t) {
        double e = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const auto a = t.states[i].to_array();
            const auto b = ref.states[i].to_array();
            for (std::size_t k = 0; k < a.size(); ++k) {
                e = std::max(e, std::abs(a[k] - b[k]));
            }
        }
        return e;
    };
    const double e1 = err(run(2));
    const double e2 = err(run(4));
    REQUIRE(e1 > 0.0);
    REQUIRE(e2 > 0.0);
    const double order = std::log2(e1 / e2);
    CHECK(order > 3.5);
    CHECK(order < 4.5);
}

TEST_CASE("simulate is deterministic")
{
    const Trajectory a = simulate(two_wave_params(), FixedRates{}, india_pop(),
                                  VaccinationSchedule::none(), 200);
    const Trajectory b = simulate(two_wave_params(), FixedRates{}, india_pop(),
                                  VaccinationSchedule::none(), 200);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto ai = a.states[i].to_array();
        const auto bi = b.states[i].to_array();
        CHECK(std::memcmp(ai.data(), bi.data(), sizeof(ai)) == 0);
    }
}

TEST_CASE("population is conserved over the full horizon")
{
    const PopulationConfig pop = india_pop();
    const Trajectory traj =
        simulate(two_wave_params(), FixedRates{}, pop, VaccinationSchedule::none(), 584);
    REQUIRE(traj.size() == 585);
    for (const auto& y : traj.states) {
        CHECK(std::abs(y.total() - pop.n) <= 1e-6 * pop.n);
    }
}

TEST_CASE("daily deaths are the first difference of cumulative deaths")
{
    const Trajectory traj =
        simulate(two_wave_params(), FixedRates{}, india_pop(), VaccinationSchedule::none(), 100);
    CHECK(traj.daily_deaths[0] == traj.states[0].dead);
    for (std::size_t i = 1; i < traj.size(); ++i) {
        CHECK(traj.daily_deaths[i] == traj.states[i].dead - traj.states[i - 1].dead);
    }
    // Cumulative deaths never decrease.
    const auto cum = traj.cumulative_deaths();
    for (std::size_t i = 1; i < cum.size(); ++i) {
        CHECK(cum[i] >= cum[i - 1]);
    }
}

TEST_CASE("two transmission waves produce two prominent death peaks")
{
    const Trajectory traj =
        simulate(two_wave_params(), FixedRates{}, india_pop(), VaccinationSchedule::none(), 584);
    const auto peaks = prominent_maxima(traj.daily_deaths, 1e-3);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[1] - peaks[0] >= 60);
}

TEST_CASE("zero transmission and zero criticality produce zero deaths")
{
    FitParameters p;
    p.r0_params.r0_start = 0.0;
    p.r0_params.r0_end = 0.0;
    p.r0_params.smoothness_k = 1.0;
    p.r0_params.waves = {{50.0, 100.0}};
    p.prob_i_to_c = 0.0;
    const Trajectory traj =
        simulate(p, FixedRates{}, india_pop(), VaccinationSchedule::none(), 365);
    for (const auto& y : traj.states) {
        CHECK(y.dead == 0.0);
        CHECK(y.critical == 0.0);
    }
    // The seed decays: infections never exceed the initial exposed count.
    for (const auto& y : traj.states) {
        CHECK(y.exposed + y.infected <= traj.states[0].exposed + 1e-9);
    }
}

TEST_CASE("reinfection feedback leaves more susceptibles than none")
{
    FixedRates with = FixedRates{};
    FixedRates without = FixedRates{};
    without.reinfection_fraction = 0.0;
    const Trajectory a =
        simulate(two_wave_params(), with, india_pop(), VaccinationSchedule::none(), 584);
    const Trajectory b =
        simulate(two_wave_params(), without, india_pop(), VaccinationSchedule::none(), 584);
    CHECK(a.states.back().susceptible > b.states.back().susceptible);
    // Without replenishment S is monotone non-increasing.
    for (std::size_t i = 1; i < b.size(); ++i) {
        CHECK(b.states[i].susceptible <= b.states[i - 1].susceptible + 1e-9);
    }
}

TEST_CASE("derived series are filled and consistent")
{
    const FitParameters p = two_wave_params();
    const PopulationConfig pop = india_pop();
    const FixedRates rates;
    const Trajectory traj = simulate(p, rates, pop, VaccinationSchedule::none(), 50);
    REQUIRE(traj.r0.size() == traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(traj.r0[i] == r0_rectangle(traj.days[i], p.r0_params));
        CHECK(traj.beta[i] == rates.gamma * traj.r0[i]);
        CHECK(traj.beds[i] == beds_at(traj.days[i], pop, p.bed_growth_s));
    }
}

TEST_CASE("default seed is max(1, N per million)")
{
    CHECK(default_initial_state({1.38e9, 1.0}, -1.0).exposed == 1380.0);
    CHECK(default_initial_state({1.0e5, 1.0}, -1.0).exposed == 1.0);
    CHECK(default_initial_state({1.38e9, 1.0}, 7.0).exposed == 7.0);
    const auto y0 = default_initial_state({1.38e9, 1.0}, -1.0);
    CHECK(y0.susceptible + y0.exposed == 1.38e9);
}

TEST_CASE("integrate argument validation")
{
    auto rhs = [](double, const CompartmentState& y) {
        DerivativeVector d;
        d.ds = -0.1 * y.susceptible;
        d.dr = 0.1 * y.susceptible;
        return d;
    };
    CompartmentState y0;
    y0.susceptible = 1.0;
    CHECK_THROWS_AS(integrate(rhs, y0, 1.0, 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(integrate(rhs, y0, 0.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(
        simulate(two_wave_params(), FixedRates{}, india_pop(), VaccinationSchedule::none(), 0),
        std::invalid_argument);
}

TEST_CASE("a diverging state raises IntegrationError with context")
{
    auto blowup = [](double, const CompartmentState& y) {
        DerivativeVector d;
        d.ds = 1e300 * (y.susceptible + 1.0);
        return d;
    };
    CompartmentState y0;
    y0.susceptible = 1.0;
    try {
        integrate(blowup, y0, 0.0, 10.0, 4);
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK(e.time() >= 0.0);
        CHECK_FALSE(std::isfinite(e.state()[0]));
        CHECK(std::string(e.what()).find("non-finite") != std::string::npos);
    }
}
