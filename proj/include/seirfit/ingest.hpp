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
#include <cstddef>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seirfit/dates.hpp"
#include "seirfit/model.hpp"

namespace seirfit {

/// Splits one RFC-4180 CSV line, honoring double quotes ("Korea, South").
inline std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

inline std::string csv_quote_if_needed(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out += c;
        }
    }
    out += '"';
    return out;
}

/// One country's cumulative series, contiguous daily values from start_date.
struct CountrySeries {
    std::string country;
    Date start_date{};
    std::vector<double> values;
};

/// Parses a JHU-style cumulative time-series CSV. Header contract:
///   Province/State,Country/Region,Lat,Long,<M/D/YY>,<M/D/YY>,...
/// All rows matching the country are summed column-wise. Unknown country,
/// ragged rows and non-numeric cells are rejected.
inline CountrySeries parse_jhu_timeseries(std::string_view content, const std::string& country)
{
    std::istringstream in{std::string(content)};
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("empty JHU file");
    }
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 5 || header[0] != "Province/State" || header[1] != "Country/Region" ||
        header[2] != "Lat" || header[3] != "Long") {
        throw std::invalid_argument(
            "JHU header must start with Province/State,Country/Region,Lat,Long");
    }
    const std::size_t n_dates = header.size() - 4;
    const Date start = parse_jhu_date(header[4]);
    for (std::size_t i = 1; i < n_dates; ++i) {
        if (days_between(start, parse_jhu_date(header[4 + i])) != static_cast<long>(i)) {
            throw std::invalid_argument("JHU date columns are not contiguous daily dates");
        }
    }

    CountrySeries out{country, start, std::vector<double>(n_dates, 0.0)};
    std::set<std::string> available;
    bool found = false;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const std::vector<std::string> row = split_csv_line(line);
        if (row.size() != header.size()) {
            throw std::invalid_argument("ragged row at line " + std::to_string(line_no) + ": " +
                                        std::to_string(row.size()) + " fields, expected " +
                                        std::to_string(header.size()));
        }
        available.insert(row[1]);
        if (row[1] != country) {
            continue;
        }
        found = true;
        for (std::size_t i = 0; i < n_dates; ++i) {
            const std::string& cell = row[4 + i];
            std::size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != cell.size() || cell.empty()) {
                throw std::invalid_argument("non-numeric cell '" + cell + "' at line " +
                                            std::to_string(line_no));
            }
            out.values[i] += v;
        }
    }
    if (!found) {
        std::string msg = "country '" + country + "' not found; available:";
        for (const auto& c : available) {
            msg += " " + c;
        }
        throw std::invalid_argument(msg);
    }
    return out;
}

/// Serializes a CountrySeries back to a single-row JHU-style CSV.
inline std::string to_jhu_csv(const CountrySeries& series)
{
    std::ostringstream os;
    os << "Province/State,Country/Region,Lat,Long";
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        os << ',' << format_jhu(series.start_date + std::chrono::days{static_cast<long>(i)});
    }
    os << '\n' << ',' << csv_quote_if_needed(series.country) << ",0,0";
    os.precision(17);
    for (double v : series.values) {
        os << ',' << v;
    }
    os << '\n';
    return os.str();
}

struct CleanResult {
    std::vector<double> values;
    std::size_t adjusted = 0; // number of points raised by the running maximum
};

/// Enforces monotone non-decreasing values by running maximum. Real feeds
/// contain downward revisions; daily differences are taken after this.
inline CleanResult clean_cumulative(std::vector<double> values)
{
    CleanResult out{std::move(values), 0};
    double running = -std::numeric_limits<double>::infinity();
    for (double& v : out.values) {
        if (v < running) {
            v = running;
            ++out.adjusted;
        } else {
            running = v;
        }
    }
    return out;
}

/// One weekly vaccination record: the week's start on the simulation day
/// clock and its first-dose count.
struct WeeklyDoses {
    long week_start_day = 0;
    double first_doses = 0.0;
};

/// Spreads each week's count uniformly as count/7 per day over its 7 days,
/// then applies the immunity lag: the effective immunization rate is the
/// daily dose series shifted forward by lag_days. Weeks must be strictly
/// increasing and non-overlapping; gaps get zero doses.
inline VaccinationSchedule weekly_to_daily_vaccination(const std::vector<WeeklyDoses>& weeks,
                                                       int lag_days)
{
    VaccinationSchedule sched;
    sched.lag_days = lag_days;
    if (weeks.empty()) {
        return sched;
    }
    for (const auto& w : weeks) {
        if (w.first_doses < 0.0) {
            throw std::invalid_argument("negative dose count");
        }
    }
    for (std::size_t i = 1; i < weeks.size(); ++i) {
        if (weeks[i].week_start_day < weeks[i - 1].week_start_day + 7) {
            throw std::invalid_argument("overlapping vaccination weeks at record " +
                                        std::to_string(i));
        }
    }
    sched.start_day = weeks.front().week_start_day;
    const long span = weeks.back().week_start_day + 7 - sched.start_day;
    sched.daily_doses.assign(static_cast<std::size_t>(span), 0.0);
    for (const auto& w : weeks) {
        const long base = w.week_start_day - sched.start_day;
        for (int d = 0; d < 7; ++d) {
            sched.daily_doses[static_cast<std::size_t>(base + d)] = w.first_doses / 7.0;
        }
    }
    return sched;
}

/// Parses the vaccination CSV interface: header `week_start,first_doses`,
/// ISO dates, one record per week.
inline std::vector<std::pair<Date, double>> parse_vaccination_csv(std::string_view content)
{
    std::istringstream in{std::string(content)};
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"week_start", "first_doses"}) {
        throw std::invalid_argument("vaccination CSV header must be week_start,first_doses");
    }
    std::vector<std::pair<Date, double>> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const std::vector<std::string> row = split_csv_line(line);
        if (row.size() != 2) {
            throw std::invalid_argument("vaccination CSV: bad row at line " +
                                        std::to_string(line_no));
        }
        out.emplace_back(parse_iso_date(row[0]), std::stod(row[1]));
    }
    return out;
}

/// Converts dated weekly records to day offsets relative to sim_start and
/// builds the daily schedule.
inline VaccinationSchedule vaccination_schedule_from_records(
    const std::vector<std::pair<Date, double>>& records, Date sim_start, int lag_days)
{
    std::vector<WeeklyDoses> weeks;
    weeks.reserve(records.size());
    for (const auto& [date, count] : records) {
        weeks.push_back({days_between(sim_start, date), count});
    }
    return weekly_to_daily_vaccination(weeks, lag_days);
}

} // namespace seirfit
