#include "sft/quantize.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include <json.hpp>

#include "sft/errors.hpp"

namespace sft {

void QuantSpec::validate() const {
  if (mantissa_min >= 0 || mantissa_max <= 0)
    throw std::domain_error("QuantSpec: mantissa range must straddle zero");
  if (exponent_min > exponent_max) throw std::domain_error("QuantSpec: bad exponent range");
  if (!(voltage_limit > 0.0) || !(max_threshold > 0.0) || max_threshold > voltage_limit)
    throw std::domain_error("QuantSpec: bad voltage range");
  if (!(current_quantum > 0.0)) throw std::domain_error("QuantSpec: bad current quantum");
}

QuantizedWeight quantize_weight(double w, const QuantSpec& spec, int shared_exp, bool force_even) {
  spec.validate();
  if (!std::isfinite(w)) throw std::domain_error("quantize_weight: non-finite weight");
  if (shared_exp < spec.exponent_min || shared_exp > spec.exponent_max)
    throw std::domain_error("quantize_weight: exponent outside representable range");

  const double raw = w / std::ldexp(1.0, shared_exp);
  long long m = std::llround(raw);
  if (m > spec.mantissa_max) m = spec.mantissa_max;
  if (m < spec.mantissa_min) m = spec.mantissa_min;

  const long long half = spec.mantissa_max >> 1;
  if (spec.even_mantissa_at_full_range && (force_even || std::llabs(m) > half) && m % 2 != 0) {
    const long long lo = m - 1;
    const long long hi = m + 1;
    const double d_lo = std::abs(raw - static_cast<double>(lo));
    const double d_hi = std::abs(raw - static_cast<double>(hi));
    long long pick;
    if (d_hi < d_lo) pick = hi;
    else if (d_lo < d_hi) pick = lo;
    else pick = m > 0 ? hi : lo;  // tie: away from zero, like the base rounding
    if (pick > spec.mantissa_max) pick = lo;
    if (pick < spec.mantissa_min) pick = hi;
    m = pick;
  }
  return {std::ldexp(static_cast<double>(m), shared_exp), static_cast<int>(m), shared_exp};
}

std::string QuantReport::json() const {
  nlohmann::json j;
  j["voltage_scale_log2"] = voltage_scale_log2;
  nlohmann::json arr = nlohmann::json::array();
  for (const LayerQuantReport& l : layers) {
    nlohmann::json lj;
    lj["exponent"] = l.exponent;
    lj["even_rule"] = l.even_rule;
    lj["max_abs_error"] = l.max_abs_error;
    lj["saturated"] = l.saturated;
    arr.push_back(lj);
  }
  j["layers"] = arr;
  return j.dump(2);
}

QuantizeResult quantize_plan(const NetworkPlan& plan, const QuantSpec& spec) {
  spec.validate();
  if (plan.quantized) throw std::invalid_argument("quantize_plan: plan is already quantized");
  if (plan.layers.empty()) throw std::invalid_argument("quantize_plan: empty plan");

  QuantizeResult out;
  out.plan = plan;
  out.plan.quantized = true;

  // Pass 1: per-layer exponent (smallest grid that reaches max |w|) and the
  // layer-wide even-mantissa trigger.
  std::vector<int> exps(plan.layers.size());
  std::vector<bool> force_even(plan.layers.size(), false);
  int max_exp = spec.exponent_min;
  const long long half = spec.mantissa_max >> 1;
  for (size_t l = 0; l < plan.layers.size(); ++l) {
    const Eigen::SparseMatrix<double>& w = plan.layers[l].weights;
    double w_max = 0.0;
    for (int c = 0; c < w.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(w, c); it; ++it)
        w_max = std::max(w_max, std::abs(it.value()));

    int e = spec.exponent_min;
    while (e <= spec.exponent_max && w_max > spec.mantissa_max * std::ldexp(1.0, e)) ++e;
    if (e > spec.exponent_max)
      throw CapacityError("quantize_plan: weights of layer " + std::to_string(l) +
                          " exceed the representable range");
    exps[l] = e;
    max_exp = std::max(max_exp, e);

    if (spec.even_mantissa_at_full_range) {
      const double grid = std::ldexp(1.0, e);
      for (int c = 0; c < w.outerSize() && !force_even[l]; ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(w, c); it; ++it)
          if (std::llabs(std::llround(it.value() / grid)) > half) {
            force_even[l] = true;
            break;
          }
    }
  }

  // Voltage scale: largest power of two keeping every threshold on the chip
  // and every shifted weight exponent representable.
  double th_max = 0.0;
  for (const LayerParams& l : plan.layers) th_max = std::max(th_max, l.threshold);
  int a = static_cast<int>(std::floor(std::log2(spec.max_threshold / th_max)));
  while (std::ldexp(th_max, a) > spec.max_threshold) --a;  // guard the log2 rounding
  a = std::min(a, spec.exponent_max - max_exp);
  for (size_t l = 0; l < plan.layers.size(); ++l)
    if (exps[l] + a < spec.exponent_min)
      throw CapacityError("quantize_plan: no voltage scale fits the exponent range");
  if (std::ldexp(th_max, a) > spec.max_threshold)
    throw CapacityError("quantize_plan: threshold cannot be represented at any legal scale");
  out.report.voltage_scale_log2 = a;

  const double vs = std::ldexp(1.0, a);
  for (size_t l = 0; l < plan.layers.size(); ++l) {
    LayerParams& lp = out.plan.layers[l];
    LayerQuantReport rep;
    rep.exponent = exps[l];
    rep.even_rule = force_even[l];

    for (int c = 0; c < lp.weights.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(lp.weights, c); it; ++it) {
        const QuantizedWeight qw = quantize_weight(it.value(), spec, exps[l], force_even[l]);
        rep.max_abs_error = std::max(rep.max_abs_error, std::abs(it.value() - qw.value));
        const double raw = it.value() / std::ldexp(1.0, exps[l]);
        if (raw > spec.mantissa_max + 0.5 || raw < spec.mantissa_min - 0.5) ++rep.saturated;
        // chip weight: same mantissa, exponent shifted by the voltage scale
        it.valueRef() = std::ldexp(static_cast<double>(qw.mantissa), exps[l] + a);
      }

    lp.threshold = std::round(lp.threshold * vs);
    const int window = lp.total_steps - lp.silent_steps;
    lp.drive_current =
        spec.current_quantum * std::ceil(2.0 * lp.threshold / (window * spec.current_quantum));
    // bias acts as a per-step current, so it is rounded at that granularity
    for (Eigen::Index i = 0; i < lp.bias.size(); ++i)
      lp.bias[i] = std::round(lp.bias[i] * vs / lp.silent_steps) * lp.silent_steps;
    lp.voltage_limit = spec.voltage_limit;
    out.report.layers.push_back(rep);
  }
  return out;
}

}  // namespace sft
