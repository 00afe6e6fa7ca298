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

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "seirfit/ingest.hpp"

using namespace seirfit;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kHeader = "Province/State,Country/Region,Lat,Long,1/22/20,1/23/20,1/24/20\n";

} // namespace

TEST_CASE("csv line splitting honors quotes")
{
    CHECK(split_csv_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_csv_line(",\"Korea, South\",1") ==
          std::vector<std::string>{"", "Korea, South", "1"});
    CHECK(split_csv_line("\"say \"\"hi\"\"\",2") ==
          std::vector<std::string>{"say \"hi\"", "2"});
    CHECK(split_csv_line("a,b\r") == std::vector<std::string>{"a", "b"});
    CHECK(split_csv_line("") == std::vector<std::string>{""});
    CHECK(split_csv_line("a,,c") == std::vector<std::string>{"a", "", "c"});
}

TEST_CASE("csv quoting round trips through the splitter")
{
    for (const std::string s : {"plain", "with,comma", "with\"quote", "both,\"of them\""}) {
        CHECK(split_csv_line(csv_quote_if_needed(s) + ",x")[0] == s);
    }
}

TEST_CASE("single-row country extraction")
{
    const std::string csv = kHeader + ",Freedonia,10,20,0,1,3\n";
    const CountrySeries out = parse_jhu_timeseries(csv, "Freedonia");
    CHECK(out.country == "Freedonia");
    CHECK(out.start_date == parse_iso_date("2020-01-22"));
    CHECK(out.values == std::vector<double>{0.0, 1.0, 3.0});
}

TEST_CASE("province rows are summed")
{
    const std::string csv = kHeader + "North,Freedonia,10,20,1,1,1\nSouth,Freedonia,11,21,2,2,2\n,Sylvania,0,0,9,9,9\n";
    const CountrySeries out = parse_jhu_timeseries(csv, "Freedonia");
    CHECK(out.values == std::vector<double>{3.0, 3.0, 3.0});
}

TEST_CASE("unknown country error lists what is available")
{
    const std::string csv = kHeader + ",Freedonia,10,20,0,1,3\n,Sylvania,0,0,1,2,3\n";
    try {
        parse_jhu_timeseries(csv, "Atlantis");
        FAIL("expected an error");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("Atlantis") != std::string::npos);
        CHECK(msg.find("Freedonia") != std::string::npos);
        CHECK(msg.find("Sylvania") != std::string::npos);
    }
}

TEST_CASE("malformed JHU input is rejected")
{
    CHECK_THROWS_AS(parse_jhu_timeseries("", "X"), std::invalid_argument);
    CHECK_THROWS_AS(parse_jhu_timeseries("a,b,c,d,e\n", "X"), std::invalid_argument);
    // Ragged row.
    CHECK_THROWS_AS(parse_jhu_timeseries(kHeader + ",Freedonia,10,20,0,1\n", "Freedonia"),
                    std::invalid_argument);
    // Non-numeric cell.
    CHECK_THROWS_AS(parse_jhu_timeseries(kHeader + ",Freedonia,10,20,0,oops,3\n", "Freedonia"),
                    std::invalid_argument);
    // Non-contiguous date columns.
    const std::string gappy =
        "Province/State,Country/Region,Lat,Long,1/22/20,1/24/20\n,Freedonia,0,0,1,2\n";
    CHECK_THROWS_AS(parse_jhu_timeseries(gappy, "Freedonia"), std::invalid_argument);
}

TEST_CASE("serialization round trips")
{
    CountrySeries s{"Korea, South", parse_iso_date("2021-03-01"), {1.0, 2.0, 2.0, 5.0}};
    const CountrySeries back = parse_jhu_timeseries(to_jhu_csv(s), s.country);
    CHECK(back.start_date == s.start_date);
    CHECK(back.values == s.values);
}

TEST_CASE("cumulative cleaning by running maximum")
{
    const CleanResult r = clean_cumulative({0.0, 5.0, 3.0, 7.0});
    CHECK(r.values == std::vector<double>{0.0, 5.0, 5.0, 7.0});
    CHECK(r.adjusted == 1);

    const CleanResult mono = clean_cumulative({1.0, 2.0, 2.0, 8.0});
    CHECK(mono.values == std::vector<double>{1.0, 2.0, 2.0, 8.0});
    CHECK(mono.adjusted == 0);

    CHECK(clean_cumulative({}).values.empty());
    // Multiple dips against the same running maximum.
    const CleanResult multi = clean_cumulative({5.0, 1.0, 2.0, 6.0});
    CHECK(multi.values == std::vector<double>{5.0, 5.0, 5.0, 6.0});
    CHECK(multi.adjusted == 2);
}

TEST_CASE("weekly doses spread over seven days with the immunity lag")
{
    const VaccinationSchedule sched = weekly_to_daily_vaccination({{10, 700.0}}, 30);
    CHECK(sched.effective_rate(39.5) == 0.0);
    for (int d = 40; d <= 46; ++d) {
        CHECK(sched.effective_rate(static_cast<double>(d)) == 100.0);
    }
    CHECK(sched.effective_rate(47.0) == 0.0);
    CHECK_THAT(sched.total_doses(), Catch::Matchers::WithinAbs(700.0, 1e-12));
}

TEST_CASE("gaps between weeks are zero-filled and totals conserved")
{
    const VaccinationSchedule sched =
        weekly_to_daily_vaccination({{0, 700.0}, {14, 1400.0}}, 0);
    CHECK(sched.effective_rate(3.0) == 100.0);
    CHECK(sched.effective_rate(8.0) == 0.0); // the skipped week
    CHECK(sched.effective_rate(15.0) == 200.0);
    double total = 0.0;
    for (double v : sched.daily_doses) {
        total += v;
    }
    CHECK_THAT(total, Catch::Matchers::WithinAbs(2100.0, 1e-9));
}

TEST_CASE("weekly input validation")
{
    CHECK_THROWS_AS(weekly_to_daily_vaccination({{0, 700.0}, {6, 700.0}}, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(weekly_to_daily_vaccination({{0, -1.0}}, 0), std::invalid_argument);
    CHECK(weekly_to_daily_vaccination({}, 30).daily_doses.empty());
}

TEST_CASE("the lag shifts the dose series by exactly lag_days")
{
    const std::vector<WeeklyDoses> weeks = {{0, 700.0}, {7, 1400.0}, {14, 700.0}};
    const VaccinationSchedule lagged = weekly_to_daily_vaccination(weeks, 30);
    const VaccinationSchedule direct = weekly_to_daily_vaccination(weeks, 0);
    for (int d = 0; d < 21; ++d) {
        CHECK(lagged.effective_rate(static_cast<double>(d + 30)) ==
              direct.effective_rate(static_cast<double>(d)));
    }
}

TEST_CASE("vaccination CSV parsing")
{
    const std::string csv = "week_start,first_doses\n2021-01-16,700\n2021-01-23,1400\n";
    const auto records = parse_vaccination_csv(csv);
    REQUIRE(records.size() == 2);
    CHECK(records[0].first == parse_iso_date("2021-01-16"));
    CHECK(records[0].second == 700.0);
    CHECK(records[1].second == 1400.0);

    CHECK_THROWS_AS(parse_vaccination_csv("date,doses\n2021-01-16,700\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_vaccination_csv("week_start,first_doses\n2021-01-16\n"),
                    std::invalid_argument);

    const VaccinationSchedule sched =
        vaccination_schedule_from_records(records, parse_iso_date("2020-01-22"), 30);
    // 2021-01-16 is day 360 of the simulation clock.
    CHECK(sched.start_day == 360);
    CHECK(sched.effective_rate(390.0) == 100.0);
    CHECK(sched.effective_rate(397.0) == 200.0);
}

TEST_CASE("date helpers")
{
    CHECK(format_iso(parse_iso_date("2020-01-22")) == "2020-01-22");
    CHECK(parse_jhu_date("1/22/20") == parse_iso_date("2020-01-22"));
    CHECK(format_jhu(parse_iso_date("2021-12-05")) == "12/5/21");
    CHECK(days_between(parse_iso_date("2020-01-22"), parse_iso_date("2020-02-01")) == 10);
    CHECK_THROWS_AS(parse_iso_date("2020-13-01"), std::invalid_argument);
    CHECK_THROWS_AS(parse_iso_date("not-a-date"), std::invalid_argument);
    CHECK_THROWS_AS(parse_jhu_date("13/40/20"), std::invalid_argument);
}

TEST_CASE("bundled country snapshot parses cleanly")
{
    const std::string csv = read_file(std::string(SEIRFIT_DATA_DIR) + "/jhu_india_deaths.csv");
    const CountrySeries india = parse_jhu_timeseries(csv, "India");
    CHECK(india.values.size() == 585);
    CHECK(india.start_date == parse_iso_date("2020-01-22"));
    const CleanResult clean = clean_cumulative(india.values);
    CHECK(clean.adjusted == 0); // the snapshot is already monotone
    CHECK(clean.values.back() > clean.values.front());

    // The file carries a second country so filtering is exercised for real.
    const CountrySeries other = parse_jhu_timeseries(csv, "Bhutan");
    CHECK(other.values.size() == 585);
    CHECK(other.values.back() == 1.0);
}

TEST_CASE("bundled vaccination snapshot parses cleanly")
{
    const std::string csv =
        read_file(std::string(SEIRFIT_DATA_DIR) + "/india_vaccination_weekly.csv");
    const auto records = parse_vaccination_csv(csv);
    CHECK(records.size() == 30);
    const VaccinationSchedule sched =
        vaccination_schedule_from_records(records, parse_iso_date("2020-01-22"), 30);
    double weekly_total = 0.0;
    for (const auto& [date, count] : records) {
        weekly_total += count;
    }
    CHECK_THAT(sched.total_doses(), Catch::Matchers::WithinRel(weekly_total, 1e-9));
}
