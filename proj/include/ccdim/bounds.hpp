// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "ccdim/graph.hpp"

namespace ccdim {

namespace detail {

/// ceil() with a small relative nudge so that analytically integral inputs
/// (e.g. 3 * ln(e^3) = 9 + 2 ulp) do not round up an extra step.
inline std::int64_t guarded_ceil(double x) {
  const double nudged = x - 1e-9 * std::max(1.0, std::fabs(x));
  return static_cast<std::int64_t>(std::ceil(nudged));
}

}  // namespace detail

/// ln C(n, k) via log-gamma; exact enough for sample-size schedules.
inline double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw InputError("log_binomial requires k <= n");
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

/// High-probability lower bound on the objective from an observed coverage
/// `omega_value` over `theta` samples: with probability at least 1 - delta_l
/// the true objective is no smaller. Tight in the sense that it converges to
/// omega_value / theta as theta grows, and collapses to 0 at omega_value = 0.
inline double lower_bound_f(double omega_value, double theta, double delta_l) {
  if (!(theta >= 1.0)) throw InputError("theta must be at least 1");
  if (!(delta_l > 0.0 && delta_l < 1.0))
    throw InputError("delta must lie in (0, 1)");
  if (omega_value <= 0.0) return 0.0;
  const double eta = std::log(1.0 / delta_l);
  const double root =
      std::sqrt(omega_value + 2.0 * eta / 9.0) - std::sqrt(eta / 2.0);
  const double value = (root * root - eta / 18.0) / theta;
  return std::clamp(value, 0.0, 1.0);
}

/// High-probability upper bound on the optimum from a coverage upper bound
/// `omega_upper` (greedy prefix + top residual marginals) over `theta`
/// samples: with probability at least 1 - delta_u the optimum is no larger.
inline double upper_bound_f(double omega_upper, double theta, double delta_u) {
  if (!(theta >= 1.0)) throw InputError("theta must be at least 1");
  if (!(delta_u > 0.0 && delta_u < 1.0))
    throw InputError("delta must lie in (0, 1)");
  const double eta = std::log(1.0 / delta_u);
  const double root =
      std::sqrt(std::max(omega_upper, 0.0) + eta / 2.0) + std::sqrt(eta / 2.0);
  return std::min(root * root / theta, 1.0);
}

/// Initial collection size for the doubling schedules.
inline std::int64_t theta_initial(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw InputError("delta must lie in (0, 1)");
  return std::max<std::int64_t>(
      1, detail::guarded_ceil(3.0 * std::log(1.0 / delta)));
}

/// Sample-size ceiling for the sentinel stage: enough samples to certify any
/// candidate prefix against every size-k competitor with failure probability
/// delta_1, at accuracy eps_1, for objectives at least f_min_value.
inline std::int64_t theta_max_stage1(std::uint64_t n, std::uint64_t k,
                                     double eps1, double delta1,
                                     double f_min_value) {
  if (k < 1 || k > n) throw InputError("k must lie in [1, n]");
  if (!(eps1 > 0.0)) throw InputError("epsilon must be positive");
  if (!(delta1 > 0.0 && delta1 < 1.0))
    throw InputError("delta must lie in (0, 1)");
  if (!(f_min_value > 0.0)) throw InputError("f_min must be positive");
  const double log_term = std::log(6.0 / delta1);
  const double root =
      std::sqrt(log_term) + std::sqrt(log_binomial(n, k) + log_term);
  const double raw = 2.0 * root * root / (eps1 * eps1 * f_min_value);
  return std::max<std::int64_t>(1, detail::guarded_ceil(raw));
}

/// Sample-size ceiling for the remaining stage after a certified sentinel
/// prefix of size b: the union bound only has to range over the C(n-b, k-b)
/// completions and the greedy ratio discounts the deviation term.
inline std::int64_t theta_max_stage2(std::uint64_t n, std::uint64_t k,
                                     std::uint64_t b, double eps2,
                                     double delta2, double f_min_value) {
  if (k < 1 || k > n) throw InputError("k must lie in [1, n]");
  if (b > k) throw InputError("sentinel size exceeds k");
  if (!(eps2 > 0.0)) throw InputError("epsilon must be positive");
  if (!(delta2 > 0.0 && delta2 < 1.0))
    throw InputError("delta must lie in (0, 1)");
  if (!(f_min_value > 0.0)) throw InputError("f_min must be positive");
  const double log_term = std::log(9.0 / delta2);
  const double greedy_ratio = 1.0 - 1.0 / std::exp(1.0);
  const double root =
      std::sqrt(log_term) +
      std::sqrt(greedy_ratio * (log_binomial(n - b, k - b) + log_term));
  const double raw = 2.0 * root * root / (eps2 * eps2 * f_min_value);
  return std::max<std::int64_t>(1, detail::guarded_ceil(raw));
}

}  // namespace ccdim
