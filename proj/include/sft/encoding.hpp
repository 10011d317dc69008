#pragma once

#include <Eigen/Dense>

#include "sft/signal.hpp"

namespace sft {

// Time-to-first-spike code: larger values spike earlier.
//   t_j = gamma * (x_max - x_j),  gamma = t_max / (2 * x_max)
// Each pipeline stage spans steps_per_stage steps; spike times are kept
// stage-relative in [0, t_max] with t_max = steps_per_stage - 1.
struct EncoderConfig {
  double x_max = 1.0;
  int steps_per_stage = 257;

  int t_max() const { return steps_per_stage - 1; }
  double gamma() const { return t_max() / (2.0 * x_max); }
  void validate() const;
};

enum class TimeMode { Stepped, Continuous };

// At most one spike per neuron; steps are integer-valued in stepped mode and
// real-valued in continuous mode, always stage-relative.
struct SpikeFrame {
  Eigen::VectorXd steps;
  Eigen::Array<bool, Eigen::Dynamic, 1> fired;
  int stage_index = 0;

  Eigen::Index size() const { return steps.size(); }
};

// Complex input of n samples becomes 2n spike channels: real parts on
// neurons [0, n), imaginary parts on [n, 2n).
SpikeFrame encode(const Signal& x, const EncoderConfig& cfg, TimeMode mode = TimeMode::Stepped);

struct Decoded {
  Signal signal;
  int missing = 0;  // neurons that never fired; decoded as -scale
};

// value_i = scale * (1 - 2 * step_i / t_max); halves recombined to complex.
Decoded decode(const SpikeFrame& frame, double scale, const EncoderConfig& cfg);

}  // namespace sft
