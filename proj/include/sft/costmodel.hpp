#pragma once

#include <array>
#include <string>
#include <vector>

#include "sft/network.hpp"

namespace sft {

// Per-operation costs of the modeled digital neuromorphic chip.
struct HardwareProfile {
  double spike_op_energy = 23.6e-12;      // J per synaptic operation
  double neuron_update_energy = 52e-12;   // J per neuron per step
  double spike_op_time = 3.5e-9;          // s per synaptic operation (per core)
  double neuron_update_time = 8.4e-9;     // s per neuron per step (per core)
  int cores = 128;

  static HardwareProfile loihi() { return {}; }
};

// Published per-spike energies of small analog/mixed-signal platforms, usable
// as alternative spike_op_energy values.
inline constexpr std::array<double, 3> kAnalogSpikeEnergies = {0.381e-12, 0.134e-12, 0.077e-12};

struct CostReport {
  PlanKind kind = PlanKind::Sdft;
  int n = 0;
  int steps_per_stage = 0;
  long long neurons = 0;
  long long spike_ops = 0;
  double energy = 0.0;        // J per frame
  double frame_period = 0.0;  // s between frames at steady state
  double latency = 0.0;       // s from input start to full spectrum
  double power = 0.0;         // W = energy / latency
};

// Synaptic operations per frame: the dense transform fires n inputs into 2n
// neurons (plus its own 2n output spikes); the layered transform has log4(n)
// stages of 8-input butterflies.
long long spike_ops(PlanKind kind, int n);

long long neuron_count(PlanKind kind, int n);

CostReport estimate(PlanKind kind, int n, int steps_per_stage,
                    const HardwareProfile& profile = HardwareProfile::loihi());

struct AcceleratorComparison {
  std::string name;
  double energy = 0.0;        // J per transform
  double time = 0.0;          // s per transform
  double energy_ratio = 0.0;  // report energy / accelerator energy
  double time_ratio = 0.0;    // report frame period / accelerator time
};

// Published FFT-accelerator figures; ratios use the frame period (throughput
// per spectrum), which is what a streaming front end competes on.
std::vector<AcceleratorComparison> compare_accelerators(const CostReport& report);

}  // namespace sft
