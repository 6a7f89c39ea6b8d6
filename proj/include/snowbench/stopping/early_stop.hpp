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

#ifndef SNOWBENCH_STOPPING_EARLY_STOP_HPP_
#define SNOWBENCH_STOPPING_EARLY_STOP_HPP_

#include <limits>
#include <vector>

namespace snowbench::stop {

// Two improvement rules are provided. kPaperVerbatim treats an epoch as
// improving when loss < l_min + delta and then moves l_min to that loss
// even when it is higher than before, letting the reference drift upward
// by at most delta per step. kConventional requires loss < l_min - delta
// and only then updates l_min and the best epoch.
enum class StopMode {
  kPaperVerbatim,
  kConventional,
};

struct StopPolicy {
  int patience = 10;         // consecutive non-improving epochs tolerated
  double min_delta = 0.001;  // loss variation that counts as improvement
  int max_epochs = 50;       // epoch budget N
  StopMode mode = StopMode::kPaperVerbatim;
};

// Throws ConfigError unless patience >= 1, min_delta >= 0, max_epochs >= 1.
void validate_policy(const StopPolicy& policy);

struct Decision {
  bool stop = false;
  int best_epoch = -1;  // -1 = the incumbent checkpoint from before epoch 0
};

// kSentinelBestEpoch marks "the model the session started from" (the
// previous stage's checkpoint); it is the best epoch of a session that
// never improved on its incumbent.
inline constexpr int kSentinelBestEpoch = -1;

struct SessionState {
  int counter = 0;  // non-improving epochs seen since the last improvement
  int epoch = 0;    // next epoch to observe
  int best_epoch = kSentinelBestEpoch;
  double l_min = std::numeric_limits<double>::infinity();
  bool finished = false;
  std::vector<Decision> history;
};

// Feeds one epoch's validation loss into the state machine; the epoch
// counter advances on every call (improving or not). Stop fires when the
// counter reaches the patience or the epoch budget is exhausted, carrying
// the best epoch. Observing a finished session throws LogicError.
Decision observe(SessionState& state, const StopPolicy& policy, double loss);

// Ordered per-epoch losses, epochs implicitly 0..n-1, with an optional
// stage tag (1 or 2).
struct LossTrace {
  int stage = 1;
  std::vector<double> losses;
};

struct StopResult {
  int best_epoch = kSentinelBestEpoch;
  int stop_epoch = 0;  // epoch of the Stop decision, or last epoch fed
  SessionState state;
};

// Folds observe over the trace; stops early when the policy fires.
// Throws EmptyInputError on an empty trace.
StopResult run_early_stop(const LossTrace& trace, const StopPolicy& policy);

// Two-stage session: encoder-frozen flags are trainer metadata only.
struct TwoStageSchedule {
  StopPolicy stage1;
  StopPolicy stage2;
  bool stage1_encoder_frozen = true;
  bool stage2_encoder_frozen = false;
};

struct TwoStageResult {
  StopResult stage1;
  StopResult stage2;  // best_epoch == kSentinelBestEpoch means stage 1 won
  int combined_best_stage = 1;
  int combined_best_epoch = 0;
};

// Stage 2 starts with stage 1's result as its incumbent: the reference
// loss is stage 1's final l_min and the incumbent best epoch is the
// sentinel, so a stage-2 trace that never improves on it yields the
// stage-1 checkpoint.
TwoStageResult two_stage_run(const LossTrace& stage1, const LossTrace& stage2,
                             const TwoStageSchedule& schedule);

// Savitzky-Golay smoothing: least-squares local polynomial of the given
// order over an odd window; edge samples fall back to the truncated
// one-sided window (with the order clamped to the window's freedom).
// Polynomials up to the order are reproduced exactly. Epochs unchanged.
LossTrace savgol_smooth(const LossTrace& trace, int window, int order = 4);

}  // namespace snowbench::stop

#endif  // SNOWBENCH_STOPPING_EARLY_STOP_HPP_
