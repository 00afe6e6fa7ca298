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

#include <chrono>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace seirfit {

using Date = std::chrono::sys_days;

/// Parses "YYYY-MM-DD".
inline Date parse_iso_date(std::string_view s)
{
    int y = 0, m = 0, d = 0;
    if (std::sscanf(std::string(s).c_str(), "%d-%d-%d", &y, &m, &d) != 3) {
        throw std::invalid_argument("bad ISO date: '" + std::string(s) + "'");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw std::invalid_argument("invalid calendar date: '" + std::string(s) + "'");
    }
    return std::chrono::sys_days{ymd};
}

/// Parses the JHU header date format "M/D/YY" (two-digit year, 2000-based).
inline Date parse_jhu_date(std::string_view s)
{
    int m = 0, d = 0, y = 0;
    if (std::sscanf(std::string(s).c_str(), "%d/%d/%d", &m, &d, &y) != 3) {
        throw std::invalid_argument("bad M/D/YY date: '" + std::string(s) + "'");
    }
    if (y < 100) {
        y += 2000;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw std::invalid_argument("invalid calendar date: '" + std::string(s) + "'");
    }
    return std::chrono::sys_days{ymd};
}

inline std::string format_iso(Date d)
{
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

/// Formats a date back to the JHU "M/D/YY" header form (no zero padding).
inline std::string format_jhu(Date d)
{
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%u/%u/%02d", static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<int>(ymd.year()) % 100);
    return buf;
}

inline long days_between(Date from, Date to)
{
    return (to - from).count();
}

} // namespace seirfit
