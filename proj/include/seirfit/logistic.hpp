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

#include <cmath>

namespace seirfit {

/// Numerically stable logistic function 1/(1+e^(-x)).
/// Evaluated branchwise so the exponential argument is never positive;
/// arguments beyond +-709 (the IEEE double exp overflow threshold)
/// short-circuit to the saturated values.
inline double stable_logistic(double x)
{
    if (x >= 709.0) {
        return 1.0;
    }
    if (x <= -709.0) {
        return 0.0;
    }
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double ex = std::exp(x);
    return ex / (1.0 + ex);
}

/// Inverse of the logistic: log(p/(1-p)) for p in (0,1).
inline double logit(double p)
{
    return std::log(p) - std::log1p(-p);
}

} // namespace seirfit
