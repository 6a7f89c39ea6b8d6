// Copyright 2026 The Snowbench Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "snowbench/stopping/early_stop.hpp"

#include <algorithm>

#include <Eigen/Dense>

#include "snowbench/core/error.hpp"

namespace snowbench::stop {

void validate_policy(const StopPolicy& policy) {
  if (policy.patience < 1) throw ConfigError("patience must be >= 1");
  if (!(policy.min_delta >= 0.0)) throw ConfigError("min delta must be >= 0");
  if (policy.max_epochs < 1) throw ConfigError("max epochs must be >= 1");
}

Decision observe(SessionState& state, const StopPolicy& policy, double loss) {
  validate_policy(policy);
  if (state.finished) throw LogicError("observe called on a finished session");

  const int epoch = state.epoch;
  // The epoch counter advances on every call, improving or not; only the
  // patience counter is conditional.
  const bool improved = policy.mode == StopMode::kPaperVerbatim
                            ? loss < state.l_min + policy.min_delta
                            : loss < state.l_min - policy.min_delta;
  if (improved) {
    state.l_min = loss;
    state.counter = 0;
    state.best_epoch = epoch;
  } else {
    ++state.counter;
  }
  state.epoch = epoch + 1;

  Decision decision;
  decision.best_epoch = state.best_epoch;
  decision.stop = state.counter >= policy.patience || state.epoch >= policy.max_epochs;
  if (decision.stop) state.finished = true;
  state.history.push_back(decision);
  return decision;
}

StopResult run_early_stop(const LossTrace& trace, const StopPolicy& policy) {
  if (trace.losses.empty()) throw EmptyInputError("loss trace is empty");
  StopResult result;
  for (const double loss : trace.losses) {
    const Decision d = observe(result.state, policy, loss);
    result.stop_epoch = result.state.epoch - 1;
    result.best_epoch = d.best_epoch;
    if (d.stop) break;
  }
  return result;
}

TwoStageResult two_stage_run(const LossTrace& stage1, const LossTrace& stage2,
                             const TwoStageSchedule& schedule) {
  TwoStageResult result;
  result.stage1 = run_early_stop(stage1, schedule.stage1);

  if (stage2.losses.empty()) throw EmptyInputError("stage-2 loss trace is empty");
  StopResult r2;
  r2.state.l_min = result.stage1.state.l_min;  // incumbent = stage-1 result
  r2.best_epoch = kSentinelBestEpoch;
  for (const double loss : stage2.losses) {
    const Decision d = observe(r2.state, schedule.stage2, loss);
    r2.stop_epoch = r2.state.epoch - 1;
    r2.best_epoch = d.best_epoch;
    if (d.stop) break;
  }
  result.stage2 = r2;

  if (r2.best_epoch == kSentinelBestEpoch) {
    result.combined_best_stage = 1;
    result.combined_best_epoch = result.stage1.best_epoch;
  } else {
    result.combined_best_stage = 2;
    result.combined_best_epoch = r2.best_epoch;
  }
  return result;
}

LossTrace savgol_smooth(const LossTrace& trace, int window, int order) {
  if (window < 1 || window % 2 == 0) throw ConfigError("window must be odd and positive");
  if (order < 0) throw ConfigError("polynomial order must be >= 0");
  if (window <= order) throw ConfigError("window must exceed the polynomial order");
  const auto n = static_cast<int>(trace.losses.size());
  if (n < window) throw ConfigError("trace shorter than the smoothing window");

  const int half = window / 2;
  LossTrace out;
  out.stage = trace.stage;
  out.losses.resize(trace.losses.size());

  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    const int m = hi - lo + 1;
    // Truncated edge windows may not support the full order; clamping to
    // m - 1 keeps the system square-or-overdetermined (when m <= order + 1
    // the fit interpolates, so sample points pass through unchanged).
    const int fit_order = std::min(order, m - 1);

    Eigen::MatrixXd design(m, fit_order + 1);
    Eigen::VectorXd rhs(m);
    for (int j = 0; j < m; ++j) {
      const double u = static_cast<double>(lo + j - i);  // centered abscissa
      double power = 1.0;
      for (int k = 0; k <= fit_order; ++k) {
        design(j, k) = power;
        power *= u;
      }
      rhs(j) = trace.losses[static_cast<std::size_t>(lo + j)];
    }
    const Eigen::VectorXd coeffs = design.colPivHouseholderQr().solve(rhs);
    out.losses[static_cast<std::size_t>(i)] = coeffs(0);  // value at u = 0
  }
  return out;
}

}  // namespace snowbench::stop
