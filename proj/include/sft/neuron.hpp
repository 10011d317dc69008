#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "sft/encoding.hpp"

namespace sft {

// One layer of integrate-and-fire neurons operating in two stages:
//  * silent stage (steps 1..silent_steps): each input spike j contributes
//    w_ij * (t - t_j) to the membrane; the bias acts as a constant current
//    bias_i / silent_steps per step so u_i(t_s) = sum_j w_ij (t_s - t_j) + b_i.
//    Crossing the threshold here is an error, not a spike.
//  * spiking stage (steps silent_steps+1..total_steps): a constant drive
//    current ramps every membrane up; the crossing time encodes the value.
struct LayerParams {
  Eigen::SparseMatrix<double> weights;  // row = postsynaptic, col = presynaptic
  Eigen::VectorXd bias;
  double threshold = 0.0;      // u_th
  double drive_current = 0.0;  // I_ext, >= 2 u_th / (total_steps - silent_steps)
  int silent_steps = 0;        // t_s
  int total_steps = 0;         // t_T
  double scale = 1.0;          // decode normalizer in value units
  double voltage_limit = 0.0;  // saturation bound; 0 disables (used when quantized)

  void validate() const;
};

struct NeuronState {
  double membrane = 0.0;            // u_i
  double accumulated_weight = 0.0;  // running sum of causal w_ij
  bool fired = false;
  double fire_step = -1.0;  // absolute step, set by the spiking stage
};

enum class ThresholdMode { General, DftHalf };

// General: gamma * x_max * max_i sum_j |w_ij| (no premature spike for any
// input within [-x_max, x_max]).  DftHalf: half the row-0 sum, valid for
// transforms of real signals whose spectrum magnitude stays below half the
// zero-bin maximum; row 0 must be non-negative.
double compute_threshold(const Eigen::SparseMatrix<double>& weights, double gamma, double x_max,
                         ThresholdMode mode);
double compute_threshold(const Eigen::MatrixXd& weights, double gamma, double x_max,
                         ThresholdMode mode);

// b_i = -(t_s - gamma * x_max) * sum_j w_ij, which cancels the code offset so
// u_i(t_s) = gamma * sum_j w_ij x_j.
Eigen::VectorXd compute_bias(const Eigen::SparseMatrix<double>& weights, int silent_steps,
                             double gamma, double x_max);
Eigen::VectorXd compute_bias(const Eigen::MatrixXd& weights, int silent_steps, double gamma,
                             double x_max);

// Integrates the silent stage.  Stepped mode walks every integer step so the
// premature-spike check (and optional saturation) sees exactly what discrete
// hardware would; the returned membranes use the closed form, which the
// per-step recurrence equals in exact arithmetic.  Continuous mode evaluates
// at spike arrival times, where the piecewise-linear trajectory attains its
// extrema.  clamp_count, when given, receives the number of saturated
// voltage updates.
std::vector<NeuronState> run_silent(const LayerParams& params, const SpikeFrame& input,
                                    TimeMode mode = TimeMode::Stepped,
                                    int* clamp_count = nullptr);

// Applies the drive-current ramp and returns one spike per neuron with
// stage-relative times.  Stepped firing obeys
//   fire_step = t_s + ceil((u_th - u_i(t_s)) / I_ext)
// for membranes strictly below threshold (the only states a legal silent
// stage can produce); a membrane already at threshold fires at the first
// spiking step.
SpikeFrame run_spiking(std::vector<NeuronState>& states, const LayerParams& params,
                       TimeMode mode = TimeMode::Stepped);

}  // namespace sft
