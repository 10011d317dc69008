#include "sft/neuron.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sft/errors.hpp"

namespace sft {

namespace {

Eigen::VectorXd row_abs_sums(const Eigen::SparseMatrix<double>& w) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(w.rows());
  for (int c = 0; c < w.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(w, c); it; ++it)
      s[it.row()] += std::abs(it.value());
  return s;
}

Eigen::VectorXd row_sums(const Eigen::SparseMatrix<double>& w) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(w.rows());
  for (int c = 0; c < w.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(w, c); it; ++it)
      s[it.row()] += it.value();
  return s;
}

double threshold_from_sums(const Eigen::VectorXd& abs_sums, const Eigen::VectorXd& row0,
                           double gamma, double x_max, ThresholdMode mode) {
  if (!(gamma > 0.0) || !(x_max > 0.0))
    throw std::domain_error("compute_threshold: gamma and x_max must be positive");
  if (mode == ThresholdMode::General) {
    const double m = abs_sums.maxCoeff();
    if (!(m > 0.0)) throw std::domain_error("compute_threshold: all-zero weights");
    return gamma * x_max * m;
  }
  if ((row0.array() < 0.0).any())
    throw std::invalid_argument("compute_threshold: half-range mode requires a non-negative row 0");
  const double s = row0.sum();
  if (!(s > 0.0)) throw std::invalid_argument("compute_threshold: row 0 sums to zero");
  return 0.5 * gamma * x_max * s;
}

}  // namespace

void LayerParams::validate() const {
  if (weights.rows() == 0 || weights.cols() == 0)
    throw std::domain_error("LayerParams: empty weight matrix");
  if (bias.size() != weights.rows()) throw std::domain_error("LayerParams: bias size mismatch");
  if (!(threshold > 0.0) || !std::isfinite(threshold))
    throw std::domain_error("LayerParams: threshold must be positive");
  if (silent_steps < 1 || total_steps <= silent_steps)
    throw std::domain_error("LayerParams: need total_steps > silent_steps >= 1");
  const int window = total_steps - silent_steps;
  if (!(drive_current > 0.0) ||
      drive_current * window < 2.0 * threshold * (1.0 - 1e-12))
    throw std::domain_error("LayerParams: drive current cannot reach +u_th from -u_th in time");
  if (!(scale > 0.0)) throw std::domain_error("LayerParams: scale must be positive");
}

double compute_threshold(const Eigen::SparseMatrix<double>& weights, double gamma, double x_max,
                         ThresholdMode mode) {
  return threshold_from_sums(row_abs_sums(weights),
                             Eigen::VectorXd(weights.row(0).toDense().transpose()), gamma, x_max,
                             mode);
}

double compute_threshold(const Eigen::MatrixXd& weights, double gamma, double x_max,
                         ThresholdMode mode) {
  return threshold_from_sums(weights.cwiseAbs().rowwise().sum(),
                             Eigen::VectorXd(weights.row(0).transpose()), gamma, x_max, mode);
}

Eigen::VectorXd compute_bias(const Eigen::SparseMatrix<double>& weights, int silent_steps,
                             double gamma, double x_max) {
  return -(silent_steps - gamma * x_max) * row_sums(weights);
}

Eigen::VectorXd compute_bias(const Eigen::MatrixXd& weights, int silent_steps, double gamma,
                             double x_max) {
  return -(silent_steps - gamma * x_max) * Eigen::VectorXd(weights.rowwise().sum());
}

std::vector<NeuronState> run_silent(const LayerParams& params, const SpikeFrame& input,
                                    TimeMode mode, int* clamp_count) {
  params.validate();
  if (input.size() != params.weights.cols())
    throw std::invalid_argument("run_silent: input size does not match weight columns");

  const int t_s = params.silent_steps;
  const Eigen::Index n_out = params.weights.rows();
  const Eigen::Index n_in = input.size();

  for (Eigen::Index j = 0; j < n_in; ++j)
    if (input.fired[j] && (input.steps[j] < 0.0 || input.steps[j] >= static_cast<double>(t_s)))
      throw std::invalid_argument("run_silent: spike step of input " + std::to_string(j) +
                                  " outside the silent window");

  int clamps = 0;
  const double limit = params.voltage_limit;
  auto clamp = [&](Eigen::VectorXd& u) {
    if (limit <= 0.0) return;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (u[i] > limit) { u[i] = limit; ++clamps; }
      else if (u[i] < -limit) { u[i] = -limit; ++clamps; }
    }
  };
  auto check_below_threshold = [&](const Eigen::VectorXd& u, double step) {
    Eigen::Index worst;
    const double m = u.maxCoeff(&worst);
    if (m >= params.threshold)
      throw PrematureSpikeError(static_cast<int>(worst), step, m, params.threshold);
  };

  // slope = sum of arrived weights per neuron; moment = sum of w * t_j, so
  // u(t) = slope * t - moment + bias * t / t_s between arrivals.
  Eigen::VectorXd slope = Eigen::VectorXd::Zero(n_out);
  const Eigen::VectorXd bias_rate = params.bias / static_cast<double>(t_s);
  bool saturated = false;

  if (mode == TimeMode::Stepped) {
    std::vector<std::vector<Eigen::Index>> arrivals(t_s);
    for (Eigen::Index j = 0; j < n_in; ++j) {
      if (!input.fired[j]) continue;
      const double st = input.steps[j];
      if (st != std::floor(st))
        throw std::invalid_argument("run_silent: non-integer spike step in stepped mode");
      arrivals[static_cast<int>(st)].push_back(j);
    }
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n_out);
    for (int t = 1; t <= t_s; ++t) {
      for (Eigen::Index j : arrivals[t - 1])
        for (Eigen::SparseMatrix<double>::InnerIterator it(params.weights, j); it; ++it)
          slope[it.row()] += it.value();
      u += slope + bias_rate;
      clamp(u);
      check_below_threshold(u, static_cast<double>(t));
    }
    saturated = clamps > 0;
    if (saturated) {
      // keep the saturated trajectory; the closed form below assumes linearity
      std::vector<NeuronState> states(n_out);
      for (Eigen::Index i = 0; i < n_out; ++i)
        states[i] = {u[i], slope[i], false, -1.0};
      if (clamp_count) *clamp_count += clamps;
      return states;
    }
  } else {
    std::vector<std::pair<double, Eigen::Index>> events;
    events.reserve(n_in);
    for (Eigen::Index j = 0; j < n_in; ++j)
      if (input.fired[j]) events.emplace_back(input.steps[j], j);
    std::sort(events.begin(), events.end());

    Eigen::VectorXd moment = Eigen::VectorXd::Zero(n_out);
    Eigen::VectorXd u(n_out);
    size_t e = 0;
    while (e < events.size()) {
      const double tau = events[e].first;
      while (e < events.size() && events[e].first == tau) {
        const Eigen::Index j = events[e].second;
        for (Eigen::SparseMatrix<double>::InnerIterator it(params.weights, j); it; ++it) {
          slope[it.row()] += it.value();
          moment[it.row()] += it.value() * tau;
        }
        ++e;
      }
      if (tau > 0.0) {
        u = slope * tau - moment + bias_rate * tau;
        clamp(u);
        check_below_threshold(u, tau);
      }
    }
    u = slope * t_s - moment + params.bias;
    clamp(u);
    check_below_threshold(u, static_cast<double>(t_s));
  }

  // Exact membrane at t_s: one product per weight instead of t_s summands.
  Eigen::VectorXd reach = Eigen::VectorXd::Zero(n_in);
  for (Eigen::Index j = 0; j < n_in; ++j)
    if (input.fired[j]) reach[j] = static_cast<double>(t_s) - input.steps[j];
  Eigen::VectorXd u_final = params.weights * reach + params.bias;
  clamp(u_final);
  check_below_threshold(u_final, static_cast<double>(t_s));

  if (clamp_count) *clamp_count += clamps;
  std::vector<NeuronState> states(n_out);
  for (Eigen::Index i = 0; i < n_out; ++i)
    states[i] = {u_final[i], slope[i], false, -1.0};
  return states;
}

SpikeFrame run_spiking(std::vector<NeuronState>& states, const LayerParams& params,
                       TimeMode mode) {
  params.validate();
  const Eigen::Index n = static_cast<Eigen::Index>(states.size());
  if (n != params.weights.rows())
    throw std::invalid_argument("run_spiking: state count does not match layer size");

  const double window = static_cast<double>(params.total_steps - params.silent_steps);
  SpikeFrame out;
  out.steps.resize(n);
  out.fired = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(n, true);

  for (Eigen::Index i = 0; i < n; ++i) {
    NeuronState& st = states[i];
    if (st.fired) throw std::invalid_argument("run_spiking: neuron already fired");
    double r;
    if (mode == TimeMode::Stepped) {
      r = std::max(1.0, std::ceil((params.threshold - st.membrane) / params.drive_current));
    } else {
      r = (params.threshold - st.membrane) / params.drive_current;
      if (r < 0.0) r = 0.0;
    }
    if (r > window) {
      // A membrane at exactly -u_th reaches +u_th at the last step; forgive
      // the one-ulp division slop that such boundary states can produce.
      if (st.membrane >= -params.threshold * (1.0 + 1e-12))
        r = window;
      else
        throw NoSpikeError(static_cast<int>(i));
    }
    st.fired = true;
    st.fire_step = params.silent_steps + r;
    st.membrane += r * params.drive_current;
    out.steps[i] = r;
  }
  return out;
}

}  // namespace sft
