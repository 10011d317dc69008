#pragma once

#include <string>
#include <vector>

#include "sft/network.hpp"

namespace sft {

// Fixed-point constraints of the modeled neuromorphic chip: weights are
// mantissa * 2^exponent with an exponent shared per layer, membrane voltages
// live in a signed 24-bit range, and drive currents come in quanta of 2^6.
struct QuantSpec {
  int mantissa_min = -256;
  int mantissa_max = 255;
  int exponent_min = -8;
  int exponent_max = 7;
  bool even_mantissa_at_full_range = true;  // |m| > 127 costs the low bit
  double voltage_limit = 8388608.0;         // 2^23
  double max_threshold = 8388544.0;         // 2^23 - 2^6
  double current_quantum = 64.0;            // 2^6

  void validate() const;
};

struct QuantizedWeight {
  double value = 0.0;  // mantissa * 2^exponent
  int mantissa = 0;
  int exponent = 0;
};

// Rounds w to the grid of shared_exp.  force_even applies the layer-wide
// precision loss; individual mantissas beyond 127 are rounded even whenever
// even_mantissa_at_full_range is on.
QuantizedWeight quantize_weight(double w, const QuantSpec& spec, int shared_exp,
                                bool force_even = false);

struct LayerQuantReport {
  int exponent = 0;
  bool even_rule = false;
  double max_abs_error = 0.0;  // max |w - w_hat| within the layer
  int saturated = 0;           // mantissas clipped to the representable range
};

struct QuantReport {
  std::vector<LayerQuantReport> layers;
  int voltage_scale_log2 = 0;  // power-of-two map from model volts to chip volts
  std::string json() const;
};

struct QuantizeResult {
  NetworkPlan plan;
  QuantReport report;
};

// Per layer: smallest exponent whose grid reaches max |w|, then mantissa
// rounding.  Thresholds and biases are rescaled by the largest power-of-two
// voltage scale that keeps every threshold at or below max_threshold, the
// drive current is rounded up to a whole number of current quanta, and the
// bias becomes an integer per-step current.
QuantizeResult quantize_plan(const NetworkPlan& plan, const QuantSpec& spec);

}  // namespace sft
