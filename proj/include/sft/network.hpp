#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <string>
#include <vector>

#include "sft/encoding.hpp"
#include "sft/neuron.hpp"
#include "sft/signal.hpp"

namespace sft {

using Spectrum = Eigen::VectorXcd;

enum class PlanKind { Sdft, Sfft };

// A feed-forward spiking transform: layers chained stage by stage, plus the
// output index map that undoes the radix-4 reordering.  Every layer's decode
// normalizer is recorded in `scale`; the represented values stay inside
// [-x_max, x_max] between layers and the product of scales is applied once
// when decoding the final stage.
struct NetworkPlan {
  PlanKind kind = PlanKind::Sdft;
  int n = 0;  // transform length (complex bins)
  EncoderConfig encoder;
  std::vector<LayerParams> layers;
  std::vector<int> output_map;  // natural bin k reads raw output output_map[k]
  bool quantized = false;

  double total_scale() const;
  int stage_count() const { return static_cast<int>(layers.size()) + 1; }
  std::string summary_json() const;
};

// Dense one-layer transform of 2n neurons.  real_input enables the halved
// threshold, which doubles time-code resolution but is only sound for real
// signals (conjugate-symmetric spectra).
NetworkPlan build_sdft(int n, const EncoderConfig& cfg, bool real_input = true);

// log4(n) sparse layers of radix-4 butterflies, 2n neurons each, at most 8
// inbound connections per neuron.
NetworkPlan build_sfft(int n, const EncoderConfig& cfg);

// Real 8x8 embedding of the twiddled butterfly diag(1, w, w^2, w^3) * B4,
// w = exp(-2 pi i k / n).  Rows/cols 0..3 are real parts, 4..7 imaginary.
Eigen::Matrix<double, 8, 8> butterfly_block(int k, int n);

// Base-4 digit reversal of k within n (n a power of 4).
int digit_reverse4(int k, int n);

// Dense product of the plan's layers (weights only), output rows reordered
// into natural bin order; used to check the factorization.
Eigen::MatrixXd plan_product(const NetworkPlan& plan);

struct RunResult {
  Spectrum spectrum;
  std::vector<SpikeFrame> trace;  // stage 0 = encoder output, then one per layer
  int missing = 0;
  int clamped = 0;  // saturated voltage updates (quantized runs)
};

RunResult run_plan(const NetworkPlan& plan, const Signal& input, TimeMode mode);

struct ScheduleReport {
  int steps_per_stage = 0;
  int frame_period_steps = 0;  // new frame admitted every 2 stages
  int latency_steps = 0;       // input start to output spikes
  // occupancy[stage][layer] = frame index being integrated, -1 if idle
  std::vector<std::vector<int>> occupancy;
  int frames_in_flight = 0;                  // steady-state concurrent frames
  double single_frame_layer_fraction = 0.0;  // fraction of layers one frame uses per stage
};

ScheduleReport pipeline_schedule(const NetworkPlan& plan, int n_frames);

// Builder signature shared by the evaluation drivers: length and whether the
// inputs are real signals (range axis) or complex spectra (velocity axis).
using PlanBuilder = std::function<NetworkPlan(int n, bool real_input)>;

}  // namespace sft
