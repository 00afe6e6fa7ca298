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

// Regenerates the committed fixtures under data/. Run from the repository
// root:
//   ./build/make_fixtures
// Everything here is deterministic, so reruns are byte-identical.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "seirfit/dates.hpp"
#include "seirfit/fitting.hpp"
#include "seirfit/integrator.hpp"
#include "seirfit/model.hpp"

using namespace seirfit;

namespace {

void write(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::fprintf(stderr, "cannot write %s (run from the repository root)\n", path.c_str());
        std::exit(1);
    }
    out << content;
    std::printf("wrote %s\n", path.c_str());
}

// Minimal deterministic generator for fixture noise (not for production
// use); returns values uniform in [-1, 1).
struct Lcg {
    unsigned long long state = 0x853c49e6748fea9bULL;
    double next()
    {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>((state >> 11) & 0x1FFFFFFFFFFFFFULL) / 4503599627370496.0 - 1.0;
    }
};

// A plausible two-wave mortality curve for the bundled country snapshot.
// The second window sits against the late edge of its box so its high
// phase covers spring 2021 (day 350 is 2021-01-06, 585 days total).
FitParameters snapshot_params()
{
    FitParameters p;
    p.r0_params.r0_start = 2.2;
    p.r0_params.r0_end = 0.44;
    p.r0_params.smoothness_k = 2.0;
    p.r0_params.waves = {{55.0, 150.0}, {348.0, 125.0}};
    p.prob_i_to_c = 0.025;
    p.prob_c_to_d = 0.22;
    p.bed_growth_s = 0.006;
    return p;
}

std::string jhu_snapshot()
{
    const double n = 1.38e9;
    PopulationConfig pop{n, PopulationConfig::default_beds(n)};
    const Trajectory traj = simulate(snapshot_params(), FixedRates{}, pop,
                                     VaccinationSchedule::none(), 584);

    // 0.05% multiplicative noise on daily increments keeps the cumulative
    // series monotone and realistic-looking without drowning the signal.
    Lcg rng;
    std::vector<double> noisy(traj.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double inc = i == 0 ? traj.states[0].dead
                                  : traj.states[i].dead - traj.states[i - 1].dead;
        acc += inc * (1.0 + 5.0e-4 * rng.next());
        noisy[i] = std::floor(acc);
    }

    const Date start = parse_iso_date("2020-01-22");
    std::string header = "Province/State,Country/Region,Lat,Long";
    for (std::size_t i = 0; i < noisy.size(); ++i) {
        header += ',' + format_jhu(start + std::chrono::days{static_cast<long>(i)});
    }

    // A second, flat country row so country filtering is exercised on the
    // bundled file too.
    std::string india = ",India,20.5937,78.9629";
    std::string other = ",Bhutan,27.5142,90.4336";
    for (std::size_t i = 0; i < noisy.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), ",%.0f", noisy[i]);
        india += buf;
        other += i < 400 ? ",0" : ",1";
    }
    return header + '\n' + india + '\n' + other + '\n';
}

std::string vaccination_weekly()
{
    // Weekly first-dose counts ramping up from mid-January 2021, the shape
    // of a slow rollout followed by a steep one.
    std::string out = "week_start,first_doses\n";
    const Date start = parse_iso_date("2021-01-16");
    Lcg rng;
    for (int w = 0; w < 30; ++w) {
        const double base = 1.5e6 + 7.0e5 * w + 3.0e5 * rng.next();
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%s,%.0f\n",
                      format_iso(start + std::chrono::days{7 * w}).c_str(),
                      std::max(0.0, std::floor(base)));
        out += buf;
    }
    return out;
}

std::string roundtrip_observed()
{
    // Noise-free model output at the calibrated parameter set, full
    // precision so a fit started at these values sits at (numerically)
    // zero cost.
    FitParameters p;
    p.r0_params.r0_start = 2.13470497;
    p.r0_params.r0_end = 0.45969314;
    p.r0_params.smoothness_k = 2.06340457;
    p.r0_params.waves = {{60.4533838, 146.800862}, {252.861166, 32.678741}};
    p.prob_i_to_c = 0.02359074;
    p.prob_c_to_d = 0.21900041;
    p.bed_growth_s = 0.00767634;

    const double n = 1.38e9;
    PopulationConfig pop{n, PopulationConfig::default_beds(n)};
    const Trajectory traj = simulate(p, FixedRates{}, pop, VaccinationSchedule::none(), 584);

    std::string out = "day,cumulative_deaths\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, traj.states[i].dead);
        out += buf;
    }
    return out;
}

} // namespace

int main()
{
    write("data/jhu_india_deaths.csv", jhu_snapshot());
    write("data/india_vaccination_weekly.csv", vaccination_weekly());
    write("data/roundtrip_observed.csv", roundtrip_observed());
    return 0;
}
