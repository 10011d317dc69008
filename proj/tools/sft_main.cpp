// sft: synthesize radar scenes, run the spiking transforms, and report
// accuracy and hardware cost.  A JSON config can supply any flag; explicit
// flags win.  Relative output paths land in $SFT_OUTPUT_DIR (default ".").

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sft/costmodel.hpp"
#include "sft/evaluate.hpp"
#include "sft/network.hpp"
#include "sft/oracle.hpp"
#include "sft/quantize.hpp"
#include "sft/signal.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string command;
  std::string arch = "sdft";
  int n = 1024;
  int steps = 257;
  std::string scenario = "S1";
  std::vector<std::string> scenarios = {"S1", "S2", "S3", "S4"};
  std::vector<int> n_list = {64, 256, 1024};
  std::vector<int> steps_list = {65, 129, 257, 513};
  bool quantized = false;
  std::string mode = "stepped";
  unsigned seed = 1;
  double noise = 0.01;
  bool frame = false;
  std::string format = "csv";
  std::string in_path;
  std::string out_path;
  int chirps = 64;
  double range = 10.0;
  double velocity = 1.0;
  bool compare = false;
  sft::HardwareProfile hw;

  bool operator==(const RunConfig&) const = default;

  json to_json() const {
    json j;
    j["command"] = command;
    j["arch"] = arch;
    j["n"] = n;
    j["steps"] = steps;
    j["scenario"] = scenario;
    j["scenarios"] = scenarios;
    j["n_list"] = n_list;
    j["steps_list"] = steps_list;
    j["quantized"] = quantized;
    j["mode"] = mode;
    j["seed"] = seed;
    j["noise"] = noise;
    j["frame"] = frame;
    j["format"] = format;
    j["in"] = in_path;
    j["out"] = out_path;
    j["chirps"] = chirps;
    j["range"] = range;
    j["velocity"] = velocity;
    j["compare"] = compare;
    j["hardware"] = {{"spike_op_energy", hw.spike_op_energy},
                     {"neuron_update_energy", hw.neuron_update_energy},
                     {"spike_op_time", hw.spike_op_time},
                     {"neuron_update_time", hw.neuron_update_time},
                     {"cores", hw.cores}};
    return j;
  }

  static RunConfig from_json(const json& j) {
    RunConfig c;
    c.command = j.value("command", c.command);
    c.arch = j.value("arch", c.arch);
    c.n = j.value("n", c.n);
    c.steps = j.value("steps", c.steps);
    c.scenario = j.value("scenario", c.scenario);
    c.scenarios = j.value("scenarios", c.scenarios);
    c.n_list = j.value("n_list", c.n_list);
    c.steps_list = j.value("steps_list", c.steps_list);
    c.quantized = j.value("quantized", c.quantized);
    c.mode = j.value("mode", c.mode);
    c.seed = j.value("seed", c.seed);
    c.noise = j.value("noise", c.noise);
    c.frame = j.value("frame", c.frame);
    c.format = j.value("format", c.format);
    c.in_path = j.value("in", c.in_path);
    c.out_path = j.value("out", c.out_path);
    c.chirps = j.value("chirps", c.chirps);
    c.range = j.value("range", c.range);
    c.velocity = j.value("velocity", c.velocity);
    c.compare = j.value("compare", c.compare);
    if (j.contains("hardware")) {
      const json& h = j["hardware"];
      c.hw.spike_op_energy = h.value("spike_op_energy", c.hw.spike_op_energy);
      c.hw.neuron_update_energy = h.value("neuron_update_energy", c.hw.neuron_update_energy);
      c.hw.spike_op_time = h.value("spike_op_time", c.hw.spike_op_time);
      c.hw.neuron_update_time = h.value("neuron_update_time", c.hw.neuron_update_time);
      c.hw.cores = h.value("cores", c.hw.cores);
    }
    return c;
  }
};

std::string resolve_out(const std::string& name) {
  fs::path p(name);
  if (p.is_absolute()) return name;
  const char* dir = std::getenv("SFT_OUTPUT_DIR");
  fs::path full = (dir && *dir ? fs::path(dir) : fs::path(".")) / p;
  if (full.has_parent_path()) fs::create_directories(full.parent_path());
  return full.string();
}

sft::PlanKind parse_kind(const std::string& arch) {
  return arch == "sfft" ? sft::PlanKind::Sfft : sft::PlanKind::Sdft;
}

sft::TimeMode parse_mode(const std::string& mode) {
  return mode == "continuous" ? sft::TimeMode::Continuous : sft::TimeMode::Stepped;
}

sft::SignalFormat parse_format(const std::string& fmt) {
  return fmt == "f32" ? sft::SignalFormat::F32Binary : sft::SignalFormat::Csv;
}

sft::NetworkPlan make_plan(const std::string& arch, int n, int steps, bool quantized,
                           bool real_input) {
  sft::EncoderConfig ecfg;
  ecfg.steps_per_stage = steps;
  ecfg.validate();
  sft::NetworkPlan plan = parse_kind(arch) == sft::PlanKind::Sfft
                              ? sft::build_sfft(n, ecfg)
                              : sft::build_sdft(n, ecfg, real_input);
  if (quantized) plan = sft::quantize_plan(plan, sft::QuantSpec{}).plan;
  return plan;
}

std::vector<sft::Target> targets_for(const RunConfig& c, const sft::RadarConfig& rc) {
  if (c.scenario == "dynamic") return {{c.range, c.velocity, 1.0}};
  return sft::scenario(c.scenario, rc, c.seed);
}

int cmd_synth(const RunConfig& c) {
  sft::RadarConfig rc;
  rc.samples_cap = c.n;
  if (c.frame) rc.chirps_per_frame = c.chirps;
  const std::vector<sft::Target> targets = targets_for(c, rc);

  std::printf("scenario %s: %d target(s), %d samples/chirp, %.4g m/bin\n", c.scenario.c_str(),
              static_cast<int>(targets.size()), rc.samples_per_chirp(), rc.range_resolution());
  std::printf("  %-10s %-12s %-9s %s\n", "range_m", "velocity_mps", "amplitude", "range_bin");
  for (const sft::Target& t : targets)
    std::printf("  %-10.4g %-12.4g %-9.4g %lld\n", t.range, t.radial_velocity, t.amplitude,
                static_cast<long long>(std::llround(t.range / rc.range_resolution())));

  const sft::SignalFormat fmt = parse_format(c.format);
  const std::string ext = fmt == sft::SignalFormat::Csv ? ".csv" : ".f32";
  std::string name = c.out_path;
  if (name.empty()) name = c.scenario + (c.frame ? "_frame" : "") + ext;
  const std::string path = resolve_out(name);

  if (c.frame) {
    const std::vector<sft::Signal> chirps = sft::synthesize_frame(rc, targets, c.noise, c.seed);
    sft::Signal cat;
    cat.sample_rate = rc.sampling_frequency;
    cat.samples.resize(static_cast<Eigen::Index>(chirps.size()) * chirps[0].size());
    for (size_t i = 0; i < chirps.size(); ++i)
      cat.samples.segment(static_cast<Eigen::Index>(i) * chirps[0].size(), chirps[0].size()) =
          chirps[i].samples;
    sft::save_signal(cat, path, fmt);
    std::printf("wrote %s (%d chirps x %lld samples)\n", path.c_str(), rc.chirps_per_frame,
                static_cast<long long>(chirps[0].size()));
  } else {
    const sft::Signal chirp = sft::synthesize_chirp(rc, targets, c.noise, c.seed);
    sft::save_signal(chirp, path, fmt);
    std::printf("wrote %s (%lld samples)\n", path.c_str(),
                static_cast<long long>(chirp.size()));
  }
  return 0;
}

int cmd_run(const RunConfig& c) {
  sft::Signal input;
  if (!c.in_path.empty()) {
    input = sft::load_signal(c.in_path, parse_format(c.format));
    if (input.size() != c.n)
      throw std::invalid_argument("input has " + std::to_string(input.size()) +
                                  " samples but --n is " + std::to_string(c.n));
  } else {
    sft::RadarConfig rc;
    rc.samples_cap = c.n;
    if (rc.samples_per_chirp() != c.n)
      throw std::invalid_argument("--n " + std::to_string(c.n) +
                                  " is not reachable with the default front end");
    input = sft::synthesize_chirp(rc, targets_for(c, rc), c.noise, c.seed);
  }

  const sft::NetworkPlan plan = make_plan(c.arch, c.n, c.steps, c.quantized, true);
  const sft::RunResult run = sft::run_plan(plan, input, parse_mode(c.mode));
  const sft::Spectrum reference = sft::oracle::dft(input.samples);
  const sft::NormalizedPair np = sft::normalize_pair(run.spectrum, reference, true);

  const std::string path = resolve_out(c.out_path.empty() ? "spectrum.csv" : c.out_path);
  sft::write_spectrum_csv(path, reference, run.spectrum);

  int peak = 0, oracle_peak = 0;
  double best = -1.0, obest = -1.0;
  for (int k = 1; k <= c.n / 2; ++k) {
    if (std::abs(run.spectrum[k]) > best) best = std::abs(run.spectrum[k]), peak = k;
    if (std::abs(reference[k]) > obest) obest = std::abs(reference[k]), oracle_peak = k;
  }
  std::printf("arch=%s n=%d steps=%d quantized=%d mode=%s\n", c.arch.c_str(), c.n, c.steps,
              c.quantized ? 1 : 0, c.mode.c_str());
  std::printf("rmse=%.6g peak_bin=%d oracle_peak_bin=%d missing=%d clamped=%d\n",
              sft::rmse(np.a, np.b), peak, oracle_peak, run.missing, run.clamped);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_sweep(const RunConfig& c) {
  const sft::SweepResult res = sft::sweep_steps(parse_kind(c.arch), c.scenarios, c.n_list,
                                                c.steps_list, c.quantized, c.seed, c.noise);
  const std::string path = resolve_out(c.out_path.empty() ? "sweep.csv" : c.out_path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << res.csv();
  std::printf("%d grid points, rmse fell on %.0f%% of adjacent step pairs\n",
              static_cast<int>(res.rows.size()), 100.0 * res.decreasing_fraction);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_cost(const RunConfig& c) {
  const sft::CostReport rep = sft::estimate(parse_kind(c.arch), c.n, c.steps, c.hw);
  std::printf("plan=%s n=%d steps=%d\n", c.arch.c_str(), c.n, c.steps);
  std::printf("  %-16s %lld\n", "neurons", rep.neurons);
  std::printf("  %-16s %lld\n", "spike_ops", rep.spike_ops);
  std::printf("  %-16s %.4g\n", "energy_uJ", rep.energy * 1e6);
  std::printf("  %-16s %.4g\n", "frame_period_us", rep.frame_period * 1e6);
  std::printf("  %-16s %.4g\n", "latency_us", rep.latency * 1e6);
  std::printf("  %-16s %.4g\n", "power_mW", rep.power * 1e3);

  std::vector<sft::AcceleratorComparison> cmp;
  if (c.compare) {
    cmp = sft::compare_accelerators(rep);
    std::printf("  %-24s %-10s %-8s %-13s %s\n", "accelerator", "energy_nJ", "time_us",
                "energy_ratio", "time_ratio");
    for (const sft::AcceleratorComparison& a : cmp)
      std::printf("  %-24s %-10.4g %-8.4g %-13.4g %.4g\n", a.name.c_str(), a.energy * 1e9,
                  a.time * 1e6, a.energy_ratio, a.time_ratio);
  }

  if (!c.out_path.empty()) {
    json j;
    j["plan"] = c.arch;
    j["n"] = rep.n;
    j["steps"] = rep.steps_per_stage;
    j["neurons"] = rep.neurons;
    j["spike_ops"] = rep.spike_ops;
    j["energy_j"] = rep.energy;
    j["frame_period_s"] = rep.frame_period;
    j["latency_s"] = rep.latency;
    j["power_w"] = rep.power;
    for (const sft::AcceleratorComparison& a : cmp)
      j["comparisons"].push_back({{"name", a.name},
                                  {"energy_j", a.energy},
                                  {"time_s", a.time},
                                  {"energy_ratio", a.energy_ratio},
                                  {"time_ratio", a.time_ratio}});
    const std::string path = resolve_out(c.out_path);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    std::printf("wrote %s\n", path.c_str());
  }
  return 0;
}

int cmd_rdmap(const RunConfig& c) {
  sft::RadarConfig rc;
  rc.samples_cap = c.n;
  rc.chirps_per_frame = c.chirps;
  if (rc.samples_per_chirp() != c.n)
    throw std::invalid_argument("--n " + std::to_string(c.n) +
                                " is not reachable with the default front end");
  const std::vector<sft::Target> targets = targets_for(c, rc);
  const std::vector<sft::Signal> frame = sft::synthesize_frame(rc, targets, c.noise, c.seed);

  const auto builder = [&](int len, bool real_input) {
    return make_plan(c.arch, len, c.steps, c.quantized, real_input);
  };
  const sft::RangeDopplerMap map = sft::range_doppler(frame, builder, parse_mode(c.mode));

  const std::string base = c.out_path.empty() ? "rdmap.csv" : c.out_path;
  const std::string path = resolve_out(base);
  fs::path oracle_name(base);
  oracle_name.replace_filename(oracle_name.stem().string() + "_oracle" +
                               oracle_name.extension().string());
  const std::string oracle_path = resolve_out(oracle_name.string());
  sft::write_matrix_csv(path, map.magnitude);
  sft::write_matrix_csv(oracle_path, map.oracle_magnitude);

  const auto signed_bin = [&](int bin) { return bin > c.chirps / 2 ? bin - c.chirps : bin; };
  std::printf("peak: range_bin=%d (%.3g m) doppler_bin=%d (%.3g m/s)\n", map.range_bin,
              map.range_bin * rc.range_resolution(), map.doppler_bin,
              signed_bin(map.doppler_bin) * rc.velocity_resolution());
  std::printf("oracle: range_bin=%d doppler_bin=%d match=%d\n", map.oracle_range_bin,
              map.oracle_doppler_bin,
              map.range_bin == map.oracle_range_bin && map.doppler_bin == map.oracle_doppler_bin
                  ? 1
                  : 0);
  std::printf("wrote %s\n", path.c_str());
  std::printf("wrote %s\n", oracle_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // Pass 1: pick up --config so its values become the defaults the real
  // parser starts from; explicitly passed flags then override them.
  RunConfig cfg;
  std::string config_path;
  bool config_sets_scenario = false;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) config_path = argv[i + 1];
    else if (a.rfind("--config=", 0) == 0) config_path = a.substr(9);
  }
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read config '" << config_path << "'\n";
      return 1;
    }
    try {
      const json j = json::parse(in);
      cfg = RunConfig::from_json(j);
      config_sets_scenario = j.contains("scenario");
    } catch (const std::exception& e) {
      std::cerr << "error: bad config: " << e.what() << "\n";
      return 1;
    }
  }

  CLI::App app{"time-coded spiking Fourier transform toolkit"};
  app.require_subcommand(1);
  std::string config_echo, dump_path;
  app.add_option("--config", config_echo, "JSON file supplying flag defaults");
  app.add_option("--dump-config", dump_path, "write the effective config as JSON and continue");

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--noise", cfg.noise, "additive noise sigma")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", cfg.out_path, "output path (relative paths join SFT_OUTPUT_DIR)");
  };
  const auto add_plan = [&](CLI::App* sub) {
    sub->add_option("--arch", cfg.arch, "transform architecture")
        ->check(CLI::IsMember({"sdft", "sfft"}));
    sub->add_option("--steps", cfg.steps, "time steps per stage")->check(CLI::Range(2, 1 << 20));
    sub->add_flag("--quantized", cfg.quantized, "apply fixed-point hardware constraints");
    sub->add_option("--mode", cfg.mode, "integration time base")
        ->check(CLI::IsMember({"stepped", "continuous"}));
  };

  CLI::App* synth = app.add_subcommand("synth", "synthesize a radar scene");
  synth->add_option("--scenario", cfg.scenario, "target set S1..S4");
  synth->add_option("--n", cfg.n, "samples per chirp")->check(CLI::Range(1, 1 << 20));
  synth->add_flag("--frame", cfg.frame, "write a whole frame of chirps");
  synth->add_option("--chirps", cfg.chirps, "chirps per frame")->check(CLI::Range(1, 1 << 16));
  synth->add_option("--format", cfg.format, "file format")
      ->check(CLI::IsMember({"csv", "f32"}));
  add_common(synth);

  CLI::App* run = app.add_subcommand("run", "run one chirp through a spiking transform");
  run->add_option("--n", cfg.n, "transform length")->check(CLI::Range(1, 1 << 20));
  run->add_option("--in", cfg.in_path, "input signal (default: synthesize --scenario)");
  run->add_option("--scenario", cfg.scenario, "target set S1..S4");
  run->add_option("--format", cfg.format, "input file format")
      ->check(CLI::IsMember({"csv", "f32"}));
  add_plan(run);
  add_common(run);

  CLI::App* sweep = app.add_subcommand("sweep", "RMSE over an n x steps grid");
  sweep->add_option("--n", cfg.n_list, "transform lengths")->delimiter(',');
  sweep->add_option("--steps", cfg.steps_list, "steps-per-stage values")->delimiter(',');
  sweep->add_option("--scenarios", cfg.scenarios, "target sets to average")->delimiter(',');
  sweep->add_option("--arch", cfg.arch)->check(CLI::IsMember({"sdft", "sfft"}));
  sweep->add_flag("--quantized", cfg.quantized);
  add_common(sweep);

  CLI::App* cost = app.add_subcommand("cost", "energy, latency, and power estimate");
  cost->add_option("--n", cfg.n, "transform length")->check(CLI::Range(1, 1 << 20));
  cost->add_option("--arch", cfg.arch)->check(CLI::IsMember({"sdft", "sfft"}));
  cost->add_option("--steps", cfg.steps, "time steps per stage")->check(CLI::Range(2, 1 << 20));
  cost->add_flag("--compare", cfg.compare, "ratios against published FFT accelerators");
  cost->add_option("--spike-energy", cfg.hw.spike_op_energy, "J per synaptic op");
  cost->add_option("--update-energy", cfg.hw.neuron_update_energy, "J per neuron step");
  cost->add_option("--spike-time", cfg.hw.spike_op_time, "s per synaptic op per core");
  cost->add_option("--update-time", cfg.hw.neuron_update_time, "s per neuron step per core");
  cost->add_option("--cores", cfg.hw.cores, "neural cores")->check(CLI::PositiveNumber);
  add_common(cost);

  CLI::App* rdmap = app.add_subcommand("rdmap", "two-pass range-Doppler map of a frame");
  rdmap->add_option("--n", cfg.n, "samples per chirp")->check(CLI::Range(4, 1 << 20));
  rdmap->add_option("--chirps", cfg.chirps, "chirps per frame")->check(CLI::Range(4, 1 << 16));
  CLI::Option* rdmap_scenario =
      rdmap->add_option("--scenario", cfg.scenario, "S1..S4 or 'dynamic' (default: dynamic)");
  rdmap->add_option("--range", cfg.range, "dynamic-scenario target range, m")
      ->check(CLI::PositiveNumber);
  rdmap->add_option("--velocity", cfg.velocity, "dynamic-scenario target radial velocity, m/s");
  add_plan(rdmap);
  add_common(rdmap);

  // --config / --dump-config may appear after the subcommand name
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) cfg.command = "synth";
    else if (run->parsed()) cfg.command = "run";
    else if (sweep->parsed()) cfg.command = "sweep";
    else if (cost->parsed()) cfg.command = "cost";
    else cfg.command = "rdmap";

    // rdmap plots one mover by default; named scenes stay available opt-in.
    if (cfg.command == "rdmap" && rdmap_scenario->count() == 0 && !config_sets_scenario)
      cfg.scenario = "dynamic";

    if (!dump_path.empty()) {
      const std::string path = resolve_out(dump_path);
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
      out << cfg.to_json().dump(2) << "\n";
    }

    if (cfg.command == "synth") return cmd_synth(cfg);
    if (cfg.command == "run") return cmd_run(cfg);
    if (cfg.command == "sweep") return cmd_sweep(cfg);
    if (cfg.command == "cost") return cmd_cost(cfg);
    return cmd_rdmap(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
