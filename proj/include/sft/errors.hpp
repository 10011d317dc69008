#pragma once

#include <stdexcept>
#include <string>

namespace sft {

// A membrane crossed threshold while its layer was still integrating
// inputs.  Legal configurations keep every neuron below threshold until
// the drive current starts, so this always indicates bad inputs or a
// threshold that violates the silent-stage bound.
struct PrematureSpikeError : std::runtime_error {
  int neuron;
  double step;
  PrematureSpikeError(int neuron_, double step_, double voltage, double threshold)
      : std::runtime_error("neuron " + std::to_string(neuron_) +
                           " crossed threshold during silent stage at step " +
                           std::to_string(step_) + " (u=" + std::to_string(voltage) +
                           ", u_th=" + std::to_string(threshold) + ")"),
        neuron(neuron_),
        step(step_) {}
};

// A neuron failed to fire by the end of its spiking window.  The drive
// current is sized so that even a fully inhibited neuron fires at the
// final step; reaching this means the input exceeded the value range
// the threshold was derived for.
struct NoSpikeError : std::runtime_error {
  int neuron;
  explicit NoSpikeError(int neuron_)
      : std::runtime_error("neuron " + std::to_string(neuron_) +
                           " did not fire within its spiking window"),
        neuron(neuron_) {}
};

struct ParseError : std::runtime_error {
  int line;
  ParseError(const std::string& what, int line_)
      : std::runtime_error(what + " (line " + std::to_string(line_) + ")"), line(line_) {}
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested configuration cannot be represented on the modeled hardware
// (e.g. a threshold too large for the voltage register at any legal scale).
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sft
