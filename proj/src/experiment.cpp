#include "spinchain/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "spinchain/freefermion.hpp"
#include "spinchain/observables.hpp"
#include "spinchain/svg.hpp"

using nlohmann::json;

namespace spinchain {

// ---------------------------------------------------------------------------
// config model

CouplingSet CouplingConfig::build(int n_sites) const {
  if (type == "uniform") return CouplingSet::uniform(lambda[0], lambda[1], lambda[2], n_sites);
  if (type == "transfer_ising") return CouplingSet::transfer_ising(n_sites, scale);
  if (type == "transfer_xx") return CouplingSet::transfer_xx(n_sites, scale);
  if (type == "bonds") {
    if (static_cast<int>(bonds.size()) != n_sites - 1)
      throw ConfigError("couplings: bond list must have N-1 entries");
    CouplingSet c;
    c.bonds = bonds;
    return c;
  }
  throw ConfigError("couplings: unknown type '" + type + "'");
}

ControlFieldSpec ControlConfig::build() const {
  ControlFieldSpec s;
  if (variant == "none")
    s.variant = ControlVariant::None;
  else if (variant == "standard")
    s.variant = ControlVariant::Standard;
  else if (variant == "rotated")
    s.variant = ControlVariant::Rotated;
  else if (variant == "gate")
    s.variant = ControlVariant::Gate;
  else
    throw ConfigError("control: unknown variant '" + variant + "'");
  s.t_c = t_c;
  s.n_x = n_x;
  s.n_y = n_y;
  s.n_x1 = n_x1;
  s.n_y1 = n_y1;
  s.n_z = n_z;
  return s;
}

Eigen::VectorXd ExperimentConfig::time_grid() const {
  const Eigen::Index n = static_cast<Eigen::Index>(std::llround(time.t_max / time.dt)) + 1;
  Eigen::VectorXd t(n);
  for (Eigen::Index i = 0; i < n; ++i) t[i] = i * time.dt;
  return t;
}

// ---------------------------------------------------------------------------
// JSON <-> config

namespace {

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::array<double, 3> triple(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

CouplingConfig parse_couplings(const json& j) {
  CouplingConfig c;
  get_if(j, "type", c.type);
  if (j.contains("lambda")) c.lambda = triple(j.at("lambda"));
  get_if(j, "scale", c.scale);
  if (j.contains("bonds")) {
    c.bonds.clear();
    for (const auto& row : j.at("bonds")) c.bonds.push_back(triple(row));
  }
  return c;
}

json couplings_to_json(const CouplingConfig& c) {
  json j{{"type", c.type}};
  if (c.type == "uniform") j["lambda"] = c.lambda;
  if (c.type == "transfer_ising" || c.type == "transfer_xx") j["scale"] = c.scale;
  if (c.type == "bonds") j["bonds"] = c.bonds;
  return j;
}

ExperimentConfig from_json(const json& j) {
  ExperimentConfig cfg;
  get_if(j, "name", cfg.name);
  get_if(j, "n_sites", cfg.n_sites);
  if (j.contains("couplings")) cfg.couplings = parse_couplings(j.at("couplings"));
  if (j.contains("control")) {
    const json& c = j.at("control");
    get_if(c, "variant", cfg.control.variant);
    get_if(c, "n_x", cfg.control.n_x);
    get_if(c, "n_y", cfg.control.n_y);
    get_if(c, "n_x1", cfg.control.n_x1);
    get_if(c, "n_y1", cfg.control.n_y1);
    get_if(c, "n_z", cfg.control.n_z);
    get_if(c, "t_c", cfg.control.t_c);
  }
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    get_if(n, "enabled", cfg.noise.enabled);
    get_if(n, "mu", cfg.noise.mu);
    get_if(n, "sigma", cfg.noise.sigma);
    get_if(n, "tau", cfg.noise.tau);
    get_if(n, "realizations", cfg.noise.realizations);
    get_if(n, "seed", cfg.noise.seed);
    get_if(n, "bath_sites", cfg.noise.bath_sites);
    get_if(n, "start_at_mean", cfg.noise.start_at_mean);
  }
  if (j.contains("drive")) {
    const json& d = j.at("drive");
    get_if(d, "enabled", cfg.drive.enabled);
    if (d.contains("b")) cfg.drive.b = triple(d.at("b"));
  }
  if (j.contains("gate")) get_if(j.at("gate"), "t_g", cfg.gate.t_g);
  get_if(j, "initial_state", cfg.initial_state);
  if (j.contains("observables")) {
    cfg.observables.clear();
    for (const auto& o : j.at("observables")) {
      ObservableConfig oc;
      oc.type = o.at("type").get<std::string>();
      if (o.contains("pair")) {
        oc.pair[0] = o.at("pair")[0].get<int>();
        oc.pair[1] = o.at("pair")[1].get<int>();
      }
      get_if(o, "target", oc.target);
      get_if(o, "site", oc.site);
      cfg.observables.push_back(oc);
    }
  }
  if (j.contains("time")) {
    get_if(j.at("time"), "t_max", cfg.time.t_max);
    get_if(j.at("time"), "dt", cfg.time.dt);
  }
  if (j.contains("curves")) {
    cfg.curves.clear();
    for (const auto& c : j.at("curves")) {
      CurveConfig cc;
      cc.label = c.at("label").get<std::string>();
      get_if(c, "kind", cc.kind);
      get_if(c, "noise", cc.noise);
      get_if(c, "control", cc.control);
      get_if(c, "variant", cc.variant);
      if (c.contains("couplings")) cc.couplings = parse_couplings(c.at("couplings"));
      if (c.contains("n_y")) cc.n_y = c.at("n_y").get<double>();
      if (c.contains("t_c")) cc.t_c = c.at("t_c").get<double>();
      cfg.curves.push_back(cc);
    }
  }
  get_if(j, "concurrence_mode", cfg.concurrence_mode);
  get_if(j, "max_dense_sites", cfg.max_dense_sites);
  get_if(j, "jw_dense_check_max_sites", cfg.jw_dense_check_max_sites);
  get_if(j, "step", cfg.step);
  get_if(j, "output_dir", cfg.output_dir);
  return cfg;
}

json to_json_impl(const ExperimentConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["n_sites"] = cfg.n_sites;
  j["couplings"] = couplings_to_json(cfg.couplings);
  j["control"] = {{"variant", cfg.control.variant}, {"n_x", cfg.control.n_x},
                  {"n_y", cfg.control.n_y},         {"n_x1", cfg.control.n_x1},
                  {"n_y1", cfg.control.n_y1},       {"n_z", cfg.control.n_z},
                  {"t_c", cfg.control.t_c}};
  j["noise"] = {{"enabled", cfg.noise.enabled},
                {"mu", cfg.noise.mu},
                {"sigma", cfg.noise.sigma},
                {"tau", cfg.noise.tau},
                {"realizations", cfg.noise.realizations},
                {"seed", cfg.noise.seed},
                {"bath_sites", cfg.noise.bath_sites},
                {"start_at_mean", cfg.noise.start_at_mean}};
  j["drive"] = {{"enabled", cfg.drive.enabled}, {"b", cfg.drive.b}};
  j["gate"] = {{"t_g", cfg.gate.t_g}};
  j["initial_state"] = cfg.initial_state;
  j["observables"] = json::array();
  for (const auto& o : cfg.observables) {
    json jo{{"type", o.type}};
    if (o.type == "concurrence" || o.type == "rescaled_concurrence" || o.type == "purity")
      jo["pair"] = o.pair;
    if (o.type == "fidelity") jo["target"] = o.target;
    if (o.type == "site_fidelity") {
      jo["site"] = o.site;
      jo["target"] = o.target;
    }
    j["observables"].push_back(jo);
  }
  j["time"] = {{"t_max", cfg.time.t_max}, {"dt", cfg.time.dt}};
  j["curves"] = json::array();
  for (const auto& c : cfg.curves) {
    json jc{{"label", c.label}, {"kind", c.kind}};
    if (c.kind == "exact") {
      jc["noise"] = c.noise;
      jc["control"] = c.control;
    } else {
      jc["variant"] = c.variant;
    }
    if (c.couplings) jc["couplings"] = couplings_to_json(*c.couplings);
    if (c.n_y) jc["n_y"] = *c.n_y;
    if (c.t_c) jc["t_c"] = *c.t_c;
    j["curves"].push_back(jc);
  }
  j["concurrence_mode"] = cfg.concurrence_mode;
  j["max_dense_sites"] = cfg.max_dense_sites;
  j["jw_dense_check_max_sites"] = cfg.jw_dense_check_max_sites;
  j["step"] = cfg.step;
  j["output_dir"] = cfg.output_dir;
  return j;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (j.contains("preset")) {
    const std::string name = j.at("preset").get<std::string>();
    const auto& table = embedded_presets();
    auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown preset '" + name + "'");
    json base = json::parse(it->second);
    base.erase("preset");
    j.erase("preset");
    base.merge_patch(j);
    j = std::move(base);
  }
  try {
    return from_json(j);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
  return to_json_impl(cfg).dump(2);
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : embedded_presets()) names.push_back(k);
  return names;
}

// ---------------------------------------------------------------------------
// validation

namespace {

std::vector<int> parse_bits(const std::string& s) {
  std::vector<int> bits;
  for (char c : s) {
    if (c != '0' && c != '1') throw ConfigError("bitstring must contain only 0/1");
    bits.push_back(c - '0');
  }
  if (bits.empty()) throw ConfigError("empty bitstring");
  return bits;
}

bool uniform_couplings(const CouplingSet& c, std::array<double, 3>& out) {
  out = c.bonds.front();
  for (const auto& b : c.bonds)
    if (b != c.bonds.front()) return false;
  return true;
}

EffectiveVariant parse_variant(const std::string& v) {
  if (v == "hbar1") return EffectiveVariant::Hbar1;
  if (v == "hbar2") return EffectiveVariant::Hbar2;
  if (v == "rotated_ising") return EffectiveVariant::RotatedIsing;
  throw ConfigError("unknown effective variant '" + v + "'");
}

void check_jw_curve(const ExperimentConfig& cfg, const CurveConfig& curve) {
  const CouplingSet c =
      curve.couplings ? curve.couplings->build(cfg.n_sites) : cfg.couplings.build(cfg.n_sites);
  std::array<double, 3> l;
  if (!uniform_couplings(c, l))
    throw ConstraintError("jw curve '" + curve.label + "': couplings must be uniform");
  const double scale = std::max({1.0, std::abs(l[0]), std::abs(l[1]), std::abs(l[2])});
  if (std::abs(2.0 * l[0] + l[1] + l[2]) > 1e-12 * scale)
    throw ConstraintError("jw curve '" + curve.label +
                          "': requires 2*l1 + l2 + l3 = 0");
  if (l[0] == 0.0) throw ConstraintError("jw curve '" + curve.label + "': lambda1 = 0");
  for (char b : cfg.initial_state)
    if (b != '1')
      throw ConstraintError("jw curve '" + curve.label +
                            "': fast path requires the |11...1> initial state");
  const EffectiveVariant v = parse_variant(curve.variant);
  if (v == EffectiveVariant::RotatedIsing)
    throw ConfigError("jw curve '" + curve.label + "': variant must be hbar1 or hbar2");
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.n_sites < 2) throw ConfigError("n_sites must be >= 2");
  if (cfg.curves.empty()) throw ConfigError("no curves requested");
  if (cfg.observables.empty()) throw ConfigError("no observables requested");
  if (cfg.time.t_max <= 0 || cfg.time.dt <= 0 || cfg.time.dt > cfg.time.t_max)
    throw ConfigError("time grid: need 0 < dt <= t_max");
  if (static_cast<int>(cfg.initial_state.size()) != cfg.n_sites)
    throw ConfigError("initial_state length must equal n_sites");
  parse_bits(cfg.initial_state);
  if (cfg.noise.realizations < 1) throw ConfigError("noise.realizations must be >= 1");
  if (cfg.noise.sigma < 0 || cfg.noise.tau <= 0)
    throw ConfigError("noise: need sigma >= 0 and tau > 0");
  if (cfg.noise.bath_sites != "all" && cfg.noise.bath_sites != "first_n_minus_1")
    throw ConfigError("noise.bath_sites must be 'all' or 'first_n_minus_1'");
  if (cfg.concurrence_mode != "ensemble_then_concurrence" &&
      cfg.concurrence_mode != "average_of_concurrence")
    throw ConfigError("unknown concurrence_mode");

  cfg.couplings.build(cfg.n_sites);   // throws on malformed coupling specs
  (void)cfg.control.build();          // throws on malformed variants
  if (cfg.control.variant == "gate" && (cfg.control.n_x1 == 0.0 || cfg.control.n_y1 == 0.0))
    throw ConfigError("gate control variant requires n_x1 and n_y1");

  for (const auto& o : cfg.observables) {
    if (o.type == "concurrence" || o.type == "rescaled_concurrence" || o.type == "purity") {
      if (o.pair[0] < 1 || o.pair[1] < 1 || o.pair[0] > cfg.n_sites ||
          o.pair[1] > cfg.n_sites || o.pair[0] == o.pair[1])
        throw ConfigError("observable '" + o.type + "': invalid site pair");
    } else if (o.type == "fidelity") {
      if (static_cast<int>(o.target.size()) != cfg.n_sites)
        throw ConfigError("fidelity target length must equal n_sites");
      parse_bits(o.target);
    } else if (o.type == "site_fidelity") {
      if (o.site < 1 || o.site > cfg.n_sites)
        throw ConfigError("site_fidelity: site out of range");
      if (o.target != "0" && o.target != "1")
        throw ConfigError("site_fidelity target must be '0' or '1'");
    } else {
      throw ConfigError("unknown observable type '" + o.type + "'");
    }
  }

  bool needs_dense = false;
  bool has_effective = false;
  std::vector<std::string> labels;
  for (const auto& curve : cfg.curves) {
    if (curve.label.empty()) throw ConfigError("curve without a label");
    for (const auto& l : labels)
      if (l == curve.label) throw ConfigError("duplicate curve label '" + curve.label + "'");
    labels.push_back(curve.label);
    if (curve.kind == "exact") {
      needs_dense = true;
      if (curve.control != "on" && curve.control != "off" && curve.control != "plain_pulse")
        throw ConfigError("curve control must be on|off|plain_pulse");
      if (curve.control == "plain_pulse" && cfg.gate.t_g <= 0)
        throw ConfigError("plain_pulse baseline requires gate.t_g > 0");
    } else if (curve.kind == "effective") {
      needs_dense = true;
      has_effective = true;
      (void)parse_variant(curve.variant);
    } else if (curve.kind == "jw") {
      check_jw_curve(cfg, curve);
    } else {
      throw ConfigError("unknown curve kind '" + curve.kind + "'");
    }
    if (curve.couplings) curve.couplings->build(cfg.n_sites);
  }
  if (needs_dense && cfg.n_sites > cfg.max_dense_sites)
    throw ConstraintError("n_sites " + std::to_string(cfg.n_sites) +
                          " is infeasible for the exact path (cap " +
                          std::to_string(cfg.max_dense_sites) + "); use jw curves");
  if (cfg.drive.enabled && has_effective) {
    const long expect = std::lround(cfg.control.n_y - cfg.control.n_x);
    if (cfg.control.n_z != expect)
      throw ConstraintError("drive closed forms require n_z = n_y - n_x");
  }
  if (cfg.gate.t_g < 0) throw ConfigError("gate.t_g must be >= 0");
}

// ---------------------------------------------------------------------------
// running

namespace {

template <typename Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

double site_fidelity_of(const Eigen::VectorXcd& psi, int site, int target_bit, int n_sites) {
  const std::size_t mask = std::size_t{1} << site_bit(site, n_sites);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const bool b = (static_cast<std::size_t>(i) & mask) != 0;
    if (static_cast<int>(b) == target_bit) acc += std::norm(psi[i]);
  }
  return acc;
}

struct CurveData {
  std::vector<StateTrajectory> trajs;         // exact / effective paths
  std::map<std::string, std::vector<Eigen::Matrix4cd>> jw_pairs;  // jw path, keyed "l_m"
  double max_drift = 0.0;
  double total_drift = 0.0;
  double wall_ms = 0.0;
  bool averaged = false;  // true when trajs holds a noise ensemble
};

std::string pair_key(int i, int j) {
  if (i > j) std::swap(i, j);
  return std::to_string(i) + "_" + std::to_string(j);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, int jobs) {
  validate_config(cfg);
  const int n = cfg.n_sites;
  const Eigen::VectorXd times = cfg.time_grid();
  const SpinState psi0 = basis_state(parse_bits(cfg.initial_state));

  json meta;
  meta["name"] = cfg.name;
  meta["n_sites"] = n;
  meta["initial_state"] = cfg.initial_state;
  meta["seed"] = cfg.noise.seed;
  meta["jobs"] = jobs;
  meta["concurrence_mode"] = cfg.concurrence_mode;
  meta["bath_sites"] = cfg.noise.bath_sites;
  meta["build"] = build_identifier();
  meta["warnings"] = json::array();
  for (const auto& w : cfg.control.build().validity_warnings())
    meta["warnings"].push_back(w);

  // One shared integrator step so that every noisy curve sees the same
  // zero-order-hold noise samples.
  bool any_exact = false, any_noisy = false, any_control = false;
  double tc_min = std::numeric_limits<double>::infinity();
  for (const auto& curve : cfg.curves) {
    if (curve.kind != "exact") continue;
    any_exact = true;
    if (curve.noise && cfg.noise.enabled) any_noisy = true;
    if (curve.control == "on" && cfg.control.variant != "none") {
      any_control = true;
      tc_min = std::min(tc_min, curve.t_c.value_or(cfg.control.t_c));
    }
  }
  double h = cfg.step;
  if (h <= 0.0 && any_exact) {
    h = any_control ? tc_min / 100.0 : 1e-3;
    // snap to a divisor of the output spacing
    h = cfg.time.dt / std::ceil(cfg.time.dt / h - 1e-9);
  }
  meta["step"] = h;

  // Shared noise ensemble.
  const int R = any_noisy ? cfg.noise.realizations : 0;
  meta["realizations"] = R;
  std::vector<NoiseTrajectory> noise_paths;
  if (R > 0) {
    OUParams p{cfg.noise.mu, cfg.noise.sigma, cfg.noise.tau};
    noise_paths.reserve(R);
    for (int r = 0; r < R; ++r)
      noise_paths.push_back(ou_trajectory(p, cfg.time.t_max + h, h,
                                          derive_seed(cfg.noise.seed, r, 100),
                                          cfg.noise.start_at_mean));
  }

  std::map<std::string, CurveData> data;
  json curve_meta;

  for (const auto& curve : cfg.curves) {
    const auto t0 = std::chrono::steady_clock::now();
    CurveData cd;
    const CouplingSet coupl =
        curve.couplings ? curve.couplings->build(n) : cfg.couplings.build(n);

    if (curve.kind == "exact") {
      EvolutionPlan plan;
      plan.n_sites = n;
      plan.static_terms = chain_terms(coupl, n);
      plan.bath_all_sites = cfg.noise.bath_sites == "all";
      plan.out_times = times;
      plan.step = h;
      if (curve.control == "on" && cfg.control.variant != "none") {
        ControlFieldSpec spec = cfg.control.build();
        if (curve.n_y) spec.n_y = *curve.n_y;
        if (curve.t_c) spec.t_c = *curve.t_c;
        for (const auto& w : spec.validity_warnings())
          curve_meta[curve.label]["warnings"].push_back(w);
        plan.control = spec;
        if (cfg.gate.t_g > 0.0) plan.gate_pulse_t_g = cfg.gate.t_g;
        if (cfg.drive.enabled)
          plan.drive_b.assign(n, cfg.drive.b);
      } else if (curve.control == "plain_pulse") {
        plan.static_terms.add(-0.5 * M_PI / cfg.gate.t_g, {{1, PauliAxis::X}});
      }
      const bool noisy = curve.noise && cfg.noise.enabled;
      if (noisy) {
        cd.trajs.resize(R);
        cd.averaged = true;
        parallel_for(R, jobs, [&](int r) {
          EvolutionPlan p = plan;
          p.noise = &noise_paths[r];
          cd.trajs[r] = evolve_time_dependent(p, psi0);
        });
      } else {
        cd.trajs.push_back(evolve_time_dependent(plan, psi0));
      }
      for (const auto& tr : cd.trajs) {
        cd.max_drift = std::max(cd.max_drift, tr.max_norm_drift);
        cd.total_drift = std::max(cd.total_drift, tr.total_norm_drift);
      }
    } else if (curve.kind == "effective") {
      const EffectiveVariant v = parse_variant(curve.variant);
      Eigen::MatrixXcd heff = effective_chain(coupl, n, v);
      if (cfg.drive.enabled) {
        CouplingSet with_b = coupl;
        with_b.drive_b.assign(n, cfg.drive.b);
        heff += effective_drive(with_b, n, v);
      }
      cd.trajs.push_back(evolve_static(heff, psi0, times));
    } else {  // jw
      const EffectiveVariant v = parse_variant(curve.variant);
      std::array<double, 3> l{};
      uniform_couplings(coupl, l);
      for (const auto& o : cfg.observables) {
        if (o.type != "concurrence" && o.type != "rescaled_concurrence" && o.type != "purity")
          continue;
        const std::string key = pair_key(o.pair[0], o.pair[1]);
        if (cd.jw_pairs.count(key)) continue;
        const std::pair<int, int> pr{std::min(o.pair[0], o.pair[1]),
                                     std::max(o.pair[0], o.pair[1])};
        cd.jw_pairs[key] = jw_pair_density_curve(l[0], l[1], n, v, pr, times);

        // Dense effective propagation arbitrates the fast path before any
        // result is written.
        if (n <= cfg.jw_dense_check_max_sites) {
          const Eigen::MatrixXcd heff = effective_chain(coupl, n, v);
          const StateTrajectory dense = evolve_static(heff, psi0, times);
          double worst = 0.0;
          for (Eigen::Index i = 0; i < times.size(); ++i) {
            const double cj = concurrence(cd.jw_pairs[key][i]);
            const double cdense =
                concurrence(partial_trace_pair(dense.states[i], pr.first, pr.second, n));
            worst = std::max(worst, std::abs(cj - cdense));
          }
          if (worst > 1e-6)
            throw NumericalError("jw curve '" + curve.label +
                                 "' disagrees with the dense path (max " +
                                 std::to_string(worst) + ")");
          curve_meta[curve.label]["jw_dense_check_max_diff"] = worst;
        } else {
          curve_meta[curve.label]["jw_dense_check"] = "skipped (n_sites above check cap)";
        }
      }
    }
    const auto t1 = std::chrono::steady_clock::now();
    cd.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    curve_meta[curve.label]["wall_ms"] = cd.wall_ms;
    curve_meta[curve.label]["max_norm_drift"] = cd.max_drift;
    curve_meta[curve.label]["total_norm_drift"] = cd.total_drift;
    data.emplace(curve.label, std::move(cd));
  }

  // Reduce to one table per observable.
  RunResult result;
  for (const auto& o : cfg.observables) {
    Table table;
    table.t = times;
    if (o.type == "fidelity")
      table.name = "fidelity";
    else if (o.type == "site_fidelity")
      table.name = "site" + std::to_string(o.site) + "_fidelity";
    else
      table.name = o.type + "_" + std::to_string(o.pair[0]) + "_" + std::to_string(o.pair[1]);

    for (const auto& curve : cfg.curves) {
      const CurveData& cd = data.at(curve.label);
      Eigen::VectorXd col(times.size());

      if (curve.kind == "jw") {
        if (o.type == "fidelity" || o.type == "site_fidelity") continue;
        const auto& rhos = cd.jw_pairs.at(pair_key(o.pair[0], o.pair[1]));
        for (Eigen::Index i = 0; i < times.size(); ++i) {
          if (o.type == "purity")
            col[i] = purity(rhos[i]);
          else {
            const double c = concurrence(rhos[i]);
            col[i] = (o.type == "rescaled_concurrence") ? rescaled_concurrence(c, n) : c;
          }
        }
        table.columns.emplace_back(curve.label, col);
        continue;
      }

      const std::vector<StateTrajectory>& trajs = cd.trajs;
      const std::vector<double> weights(trajs.size(), 1.0 / double(trajs.size()));
      if (o.type == "fidelity") {
        const SpinState target = basis_state(parse_bits(o.target));
        for (Eigen::Index i = 0; i < times.size(); ++i) {
          double acc = 0.0;
          for (std::size_t r = 0; r < trajs.size(); ++r)
            acc += weights[r] * transfer_fidelity(trajs[r].states[i], target.amplitudes);
          col[i] = acc;
        }
      } else if (o.type == "site_fidelity") {
        const int bit = o.target == "1" ? 1 : 0;
        for (Eigen::Index i = 0; i < times.size(); ++i) {
          double acc = 0.0;
          for (std::size_t r = 0; r < trajs.size(); ++r)
            acc += weights[r] * site_fidelity_of(trajs[r].states[i], o.site, bit, n);
          col[i] = acc;
        }
      } else if (o.type == "concurrence" || o.type == "rescaled_concurrence") {
        if (cfg.concurrence_mode == "average_of_concurrence" && cd.averaged) {
          for (Eigen::Index i = 0; i < times.size(); ++i) {
            double acc = 0.0;
            for (std::size_t r = 0; r < trajs.size(); ++r)
              acc += weights[r] *
                     concurrence(partial_trace_pair(trajs[r].states[i], o.pair[0], o.pair[1], n));
            col[i] = acc;
          }
        } else {
          const auto rhos = ensemble_pair_density(trajs, weights, o.pair[0], o.pair[1]);
          for (Eigen::Index i = 0; i < times.size(); ++i) col[i] = concurrence(rhos[i]);
        }
        if (o.type == "rescaled_concurrence") col *= double(n - 1);
      } else {  // purity
        const auto rhos = ensemble_pair_density(trajs, weights, o.pair[0], o.pair[1]);
        for (Eigen::Index i = 0; i < times.size(); ++i) col[i] = purity(rhos[i]);
      }
      table.columns.emplace_back(curve.label, col);
    }
    result.tables.push_back(std::move(table));
  }

  meta["curves"] = curve_meta;
  result.metadata_json = meta.dump(2);
  return result;
}

std::vector<std::string> write_outputs(const RunResult& result, const std::string& dir,
                                       const std::string& name, bool svg) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> written;
  for (const auto& table : result.tables) {
    const std::string base = dir + "/" + name + "_" + table.name;
    emit_csv(table, base + ".csv");
    written.push_back(base + ".csv");
    if (svg) {
      SvgStyle style;
      style.title = name + ": " + table.name;
      style.y_label = table.name;
      emit_svg(table, base + ".svg", style);
      written.push_back(base + ".svg");
    }
  }
  const std::string meta_path = dir + "/" + name + "_meta.json";
  std::ofstream meta(meta_path);
  if (!meta) throw std::runtime_error("cannot write " + meta_path);
  meta << result.metadata_json << "\n";
  written.push_back(meta_path);
  return written;
}

std::string build_identifier() {
#ifdef SPINSIM_BUILD_ID
  return SPINSIM_BUILD_ID;
#else
  return "unknown";
#endif
}

}  // namespace spinchain
