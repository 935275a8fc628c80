#include "vvs/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vvs/bounds.hpp"
#include "vvs/experiment.hpp"
#include "vvs/tomography.hpp"

namespace vvs::cli {

namespace {

using nlohmann::json;

constexpr double kDeg = M_PI / 180.0;
const char* kSweepHeader = "theta_deg,encoding,n,s_value,std_err,announce_fraction,bound,violated\n";

double rounded(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

Encoding encoding_of(const RunConfig& cfg) {
  return cfg.encoding == "polarization" ? Encoding::polarization : Encoding::vortex;
}

AnnounceConstraint constraint_of(const RunConfig& cfg) {
  return cfg.constraint == "per-setting" ? AnnounceConstraint::per_setting : AnnounceConstraint::average;
}

bool needs_seed(const std::string& command) { return command != "bound"; }

struct Simulation {
  DensityMatrix state;
  MeasurementSet set;
  Receiver receiver;
  ChannelModel channel;
};

Simulation simulation_of(const RunConfig& cfg) {
  Receiver receiver;
  receiver.encoding = encoding_of(cfg);
  return {prepare_state(NoiseModel{cfg.resolved_v(), cfg.dephasing}, receiver.encoding), platonic_set(cfg.n),
          receiver, ChannelModel{cfg.efficiency, cfg.alice_efficiency}};
}

std::string csv_row(const std::string& theta, const RunConfig& cfg, const SteeringRunResult& r) {
  std::ostringstream os;
  os << theta << ',' << cfg.encoding << ',' << r.n << ',' << format_number(r.estimate.s_value) << ','
     << format_number(r.estimate.std_err) << ',' << format_number(r.estimate.announce_fraction) << ','
     << format_number(r.bound_at_observed_xi) << ',' << (r.violated ? "true" : "false") << '\n';
  return os.str();
}

json run_json(const std::string& theta, const RunConfig& cfg, const SteeringRunResult& r) {
  json corr = json::array();
  for (double c : r.estimate.per_setting_correlations) corr.push_back(rounded(c));
  json j;
  if (theta == "dynamic")
    j["theta_deg"] = theta;
  else
    j["theta_deg"] = rounded(std::strtod(theta.c_str(), nullptr));
  j["encoding"] = cfg.encoding;
  j["n"] = r.n;
  j["s_value"] = rounded(r.estimate.s_value);
  j["std_err"] = rounded(r.estimate.std_err);
  j["announce_fraction"] = rounded(r.estimate.announce_fraction);
  j["bound"] = rounded(r.bound_at_observed_xi);
  j["violated"] = r.violated;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["per_setting_correlations"] = corr;
  return j;
}

std::string render_runs(const RunConfig& cfg, const std::vector<std::pair<std::string, SteeringRunResult>>& runs) {
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& [th, r] : runs) arr.push_back(run_json(th, cfg, r));
    return json{{"config", cfg.to_json()}, {"runs", arr}}.dump(2) + "\n";
  }
  std::string out = kSweepHeader;
  for (const auto& [th, r] : runs) out += csv_row(th, cfg, r);
  return out;
}

std::string render_bound(const RunConfig& cfg) {
  const BoundCurve curve = bound_curve(platonic_set(cfg.n), parse_grid(cfg.xi), constraint_of(cfg));
  if (cfg.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < curve.xi_grid.size(); ++i)
      rows.push_back({{"xi", rounded(curve.xi_grid[i])},
                      {"c_n", rounded(curve.c_values[i])},
                      {"witness_pattern", format_witness(curve.witnesses[i])}});
    return json{{"config", cfg.to_json()}, {"rows", rows}}.dump(2) + "\n";
  }
  std::string out = "xi,c_n,witness_pattern\n";
  for (std::size_t i = 0; i < curve.xi_grid.size(); ++i)
    out += format_number(curve.xi_grid[i]) + ',' + format_number(curve.c_values[i]) + ',' +
           format_witness(curve.witnesses[i]) + '\n';
  return out;
}

std::string render_tomo(const RunConfig& cfg) {
  const Simulation sim = simulation_of(cfg);
  const DensityMatrix seen = observed_state(sim.state, sim.receiver, cfg.theta_deg * kDeg);
  const TomographySpec spec = cfg.settings == "minimal" ? minimal_settings(cfg.counts) : standard_settings(cfg.counts);
  const CountVector counts = simulate_counts(seen, spec, *cfg.seed);
  const ReconstructionReport rep = reconstruct(counts, spec, polarization_singlet());
  json rho = json::array();
  for (Eigen::Index r = 0; r < 4; ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < 4; ++c)
      row.push_back({{"re", rounded(rep.rho_hat.matrix()(r, c).real())},
                     {"im", rounded(rep.rho_hat.matrix()(r, c).imag())}});
    rho.push_back(row);
  }
  json j{{"config", cfg.to_json()},
         {"rho_hat", rho},
         {"fidelity", rounded(rep.fidelity_to_target)},
         {"purity", rounded(rep.purity)},
         {"log_likelihood", rounded(rep.log_likelihood)},
         {"iterations", rep.iterations},
         {"converged", rep.converged}};
  return j.dump(2) + "\n";
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    f << content;
    if (!f) throw std::runtime_error("failed writing " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

template <typename T>
void require_one_of(const std::string& field, const T& value, std::initializer_list<T> allowed) {
  for (const auto& a : allowed)
    if (a == value) return;
  throw ValidationError("invalid value for " + field);
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

std::vector<double> parse_grid(const std::string& text) {
  auto to_double = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw ValidationError("cannot parse number '" + s + "' in grid '" + text + "'");
    }
    if (pos != s.size() || !std::isfinite(v)) throw ValidationError("cannot parse number '" + s + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ValidationError("range grid must be start:stop:step");
    const double a = to_double(parts[0]), b = to_double(parts[1]), step = to_double(parts[2]);
    if (!(step > 0.0) || b < a) throw ValidationError("range grid needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= count; ++i) {
      double v = a + static_cast<double>(i) * step;
      if (std::abs(v - b) < 1e-9 * step) v = b;
      out.push_back(v);
    }
    return out;
  }
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(to_double(p));
  if (out.empty()) throw ValidationError("empty grid");
  return out;
}

double RunConfig::resolved_v() const {
  return fidelity ? werner_v_from_fidelity(*fidelity) : werner_v;
}

void RunConfig::validate() const {
  require_one_of<std::string>("command", command, {"bound", "steer", "sweep", "dynamic", "tomo"});
  require_one_of("n", n, {2, 3, 4, 6});
  require_one_of<std::string>("encoding", encoding, {"vortex", "polarization"});
  require_one_of<std::string>("dynamic_mode", dynamic_mode, {"per-trial", "per-setting"});
  require_one_of<std::string>("constraint", constraint, {"average", "per-setting"});
  require_one_of<std::string>("settings", settings, {"standard", "minimal"});
  require_one_of<std::string>("format", format, {"csv", "json"});
  if (fidelity && !(*fidelity >= 0.25 && *fidelity <= 1.0))
    throw ValidationError("fidelity must lie in [0.25, 1]");
  if (!(werner_v >= 0.0 && werner_v <= 1.0)) throw ValidationError("werner_v must lie in [0, 1]");
  if (!(dephasing >= 0.0 && dephasing <= 1.0)) throw ValidationError("dephasing must lie in [0, 1]");
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw ValidationError("efficiency must lie in (0, 1]");
  if (!(alice_efficiency > 0.0 && alice_efficiency <= 1.0))
    throw ValidationError("alice_efficiency must lie in (0, 1]");
  if (!(theta_deg >= 0.0 && theta_deg < 360.0)) throw ValidationError("theta must lie in [0, 360) degrees");
  if (command == "bound") {
    const auto grid = parse_grid(xi);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] > 0.0 && grid[i] <= 1.0)) throw ValidationError("xi values must lie in (0, 1]");
      if (i > 0 && !(grid[i] > grid[i - 1])) throw ValidationError("xi grid must be strictly increasing");
    }
  }
  if (command == "sweep")
    for (double t : parse_grid(thetas))
      if (!(t >= 0.0 && t < 360.0)) throw ValidationError("sweep angles must lie in [0, 360) degrees");
  if ((command == "steer" || command == "sweep" || command == "dynamic") &&
      trials < static_cast<std::uint64_t>(n))
    throw ValidationError("trials must be at least the number of settings");
  if (command == "tomo") {
    if (counts == 0) throw ValidationError("counts must be positive");
    if (format != "json") throw ValidationError("tomo writes JSON only (use --format json)");
  }
  if (needs_seed(command) && !seed) throw ValidationError("--seed is required for " + command);
}

nlohmann::json RunConfig::to_json() const {
  json j{{"command", command},
         {"n", n},
         {"encoding", encoding},
         {"werner_v", werner_v},
         {"dephasing", dephasing},
         {"efficiency", efficiency},
         {"alice_efficiency", alice_efficiency},
         {"theta_deg", theta_deg},
         {"thetas", thetas},
         {"xi", xi},
         {"dynamic_mode", dynamic_mode},
         {"constraint", constraint},
         {"settings", settings},
         {"trials", trials},
         {"counts", counts},
         {"out", out},
         {"format", format}};
  j["fidelity"] = fidelity ? json(*fidelity) : json(nullptr);
  j["seed"] = seed ? json(*seed) : json(nullptr);
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") c.command = v.get<std::string>();
      else if (key == "n") c.n = v.get<int>();
      else if (key == "encoding") c.encoding = v.get<std::string>();
      else if (key == "fidelity") c.fidelity = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
      else if (key == "werner_v") c.werner_v = v.get<double>();
      else if (key == "dephasing") c.dephasing = v.get<double>();
      else if (key == "efficiency") c.efficiency = v.get<double>();
      else if (key == "alice_efficiency") c.alice_efficiency = v.get<double>();
      else if (key == "theta_deg") c.theta_deg = v.get<double>();
      else if (key == "thetas") c.thetas = v.get<std::string>();
      else if (key == "xi") c.xi = v.get<std::string>();
      else if (key == "dynamic_mode") c.dynamic_mode = v.get<std::string>();
      else if (key == "constraint") c.constraint = v.get<std::string>();
      else if (key == "settings") c.settings = v.get<std::string>();
      else if (key == "trials") c.trials = v.get<std::uint64_t>();
      else if (key == "counts") c.counts = v.get<std::uint64_t>();
      else if (key == "seed") c.seed = v.is_null() ? std::nullopt : std::optional<std::uint64_t>(v.get<std::uint64_t>());
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "format") c.format = v.get<std::string>();
      else throw ValidationError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  }
  return c;
}

std::string render(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.command == "bound") return render_bound(cfg);
  if (cfg.command == "tomo") return render_tomo(cfg);

  const Simulation sim = simulation_of(cfg);
  const ExperimentOptions opts{constraint_of(cfg), true};
  std::vector<std::pair<std::string, SteeringRunResult>> runs;
  if (cfg.command == "steer") {
    runs.emplace_back(format_number(cfg.theta_deg),
                      run_experiment(sim.state, sim.set, sim.receiver, sim.channel,
                                     ThetaPolicy::fixed(cfg.theta_deg * kDeg), cfg.trials, *cfg.seed, opts));
  } else if (cfg.command == "sweep") {
    const auto degs = parse_grid(cfg.thetas);
    std::vector<double> rads;
    for (double d : degs) rads.push_back(d * kDeg);
    const auto results =
        sweep_theta(sim.state, sim.set, sim.receiver, sim.channel, rads, cfg.trials, *cfg.seed, opts);
    for (std::size_t i = 0; i < results.size(); ++i) runs.emplace_back(format_number(degs[i]), results[i]);
  } else {
    runs.emplace_back("dynamic", dynamic_rotation_run(sim.state, sim.set, sim.receiver, sim.channel, cfg.trials,
                                                      *cfg.seed, cfg.dynamic_mode == "per-setting", opts));
  }
  return render_runs(cfg, runs);
}

std::string sidecar_path(const std::string& out) { return out + ".config.json"; }

void execute(const RunConfig& cfg) {
  const std::string content = render(cfg);
  if (cfg.out.empty()) {
    std::cout << content;
    return;
  }
  write_atomic(cfg.out, content);
  write_atomic(sidecar_path(cfg.out), cfg.to_json().dump(2) + "\n");
}

int run(int argc, char** argv) {
  CLI::App app{"Vector vortex steering simulator"};
  app.require_subcommand(1);

  json overrides;
  std::vector<std::function<void()>> collectors;
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file (flags override its values)");
    auto bind = [&](auto& storage, const std::string& flag, const std::string& key, const std::string& help) {
      CLI::Option* opt = sub->add_option(flag, storage, help);
      collectors.push_back([opt, &storage, key, &overrides] {
        if (opt->count() > 0) overrides[key] = storage;
      });
    };
    static int n;
    static std::string encoding, thetas, xi, dynamic_mode, constraint, settings, out, format;
    static double fidelity, v, dephasing, efficiency, alice_eff, theta;
    static std::uint64_t trials, counts, seed;
    bind(n, "--n", "n", "number of measurement settings (2, 3, 4, 6)");
    bind(encoding, "--encoding", "encoding", "vortex | polarization");
    bind(fidelity, "--fidelity", "fidelity", "singlet fidelity of the Werner state");
    bind(v, "--v", "werner_v", "Werner visibility (ignored when --fidelity is set)");
    bind(dephasing, "--dephasing", "dephasing", "extra phase damping on Bob's photon");
    bind(efficiency, "--efficiency", "efficiency", "Bob's heralding efficiency (xi)");
    bind(alice_eff, "--alice-efficiency", "alice_efficiency", "Alice's detection efficiency (rate only)");
    bind(theta, "--theta", "theta_deg", "receiver orientation in degrees");
    bind(thetas, "--thetas", "thetas", "sweep grid in degrees, start:stop:step or list");
    bind(xi, "--xi", "xi", "announce-fraction grid, start:stop:step or list");
    bind(dynamic_mode, "--dynamic-mode", "dynamic_mode", "per-trial | per-setting");
    bind(constraint, "--constraint", "constraint", "average | per-setting announce constraint");
    bind(settings, "--settings", "settings", "tomography settings: standard | minimal");
    bind(trials, "--trials", "trials", "heralded rounds per run");
    bind(counts, "--counts", "counts", "tomography coincidences per basis pair");
    bind(seed, "--seed", "seed", "master RNG seed");
    bind(out, "--out", "out", "output path (stdout when omitted)");
    bind(format, "--format", "format", "csv | json");
  };

  std::string chosen;
  for (const char* name : {"bound", "steer", "sweep", "dynamic", "tomo"}) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub);
    sub->callback([&chosen, name] { chosen = name; });
  }
  std::string replay_path;
  CLI::App* replay = app.add_subcommand("replay", "re-run a command from its config sidecar");
  replay->add_option("sidecar", replay_path)->required();
  replay->callback([&chosen] { chosen = "replay"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    json base = json::object();
    const std::string path = chosen == "replay" ? replay_path : config_path;
    if (!path.empty()) {
      std::ifstream f(path);
      if (!f) throw ValidationError("cannot read config file " + path);
      try {
        base = json::parse(f);
      } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
      }
    }
    for (auto& c : collectors) c();
    for (auto& [k, v] : overrides.items()) base[k] = v;
    if (chosen != "replay") base["command"] = chosen;
    RunConfig cfg = RunConfig::from_json(base);
    execute(cfg);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace vvs::cli
