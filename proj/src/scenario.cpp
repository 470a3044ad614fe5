#include "hybridlfc/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "hybridlfc/error.hpp"

namespace hybridlfc {

namespace pt = boost::property_tree;

namespace {

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> parts;
  const std::string trimmed = boost::algorithm::trim_copy(s);
  if (trimmed.empty()) return parts;
  boost::algorithm::split(parts, trimmed, [sep](char c) { return c == sep; });
  for (auto& p : parts) boost::algorithm::trim(p);
  return parts;
}

std::pair<std::string, std::string> split_pair(const std::string& s) {
  const auto parts = split_list(s, ':');
  if (parts.size() != 2) {
    throw Error(ErrorCode::Config, fmt::format("expected 'a:b', got '{}'", s));
  }
  return {parts[0], parts[1]};
}

SwitchingSchedule parse_schedule(const std::string& s) {
  SwitchingSchedule out;
  for (const auto& item : split_list(s, ',')) {
    const auto [t, c] = split_pair(item);
    out.push_back({parse_number(t), parse_number(c)});
  }
  return out;
}

std::string render_schedule(const SwitchingSchedule& sched) {
  std::vector<std::string> parts;
  for (const auto& term : sched) {
    parts.push_back(format_number(term.time) + ":" + format_number(term.coefficient));
  }
  return boost::algorithm::join(parts, ", ");
}

/// G(s) given as a sum of lags "gain:time_constant, ...".
std::vector<LagTerm> parse_lags(const std::string& s) {
  std::vector<LagTerm> out;
  for (const auto& item : split_list(s, ',')) {
    const auto [k, tau] = split_pair(item);
    out.push_back({parse_number(k), parse_number(tau)});
  }
  return out;
}

std::string render_lags(const LinearStateSpace& ss) {
  // parallel_lags realizations: A = diag(-1/T), C = k/T.
  std::vector<std::string> parts;
  for (Eigen::Index i = 0; i < ss.A.rows(); ++i) {
    const double tau = -1.0 / ss.A(i, i);
    parts.push_back(format_number(ss.C(i) * tau) + ":" + format_number(tau));
  }
  return boost::algorithm::join(parts, ", ");
}

FirstOrderLag parse_lag(const std::string& s, const FirstOrderLag& base) {
  const auto parts = split_list(s, ',');
  if (parts.size() != 2) {
    throw Error(ErrorCode::Config, fmt::format("expected 'gain, time_constant', got '{}'", s));
  }
  FirstOrderLag lag = base;
  lag.gain = parse_number(parts[0]);
  lag.time_constant = parse_number(parts[1]);
  return lag;
}

std::string render_lag(const FirstOrderLag& lag) {
  return format_number(lag.gain) + ", " + format_number(lag.time_constant);
}

std::map<Component, double> parse_limits(const std::string& s) {
  std::map<Component, double> out;
  for (const auto& item : split_list(s, ',')) {
    const auto [name, v] = split_pair(item);
    out[parse_component(name)] = parse_number(v);
  }
  return out;
}

std::string render_limits(const std::map<Component, double>& limits) {
  std::vector<std::string> parts;
  for (const auto& [c, v] : limits) {
    parts.push_back(std::string(component_name(c)) + ":" + format_number(v));
  }
  return boost::algorithm::join(parts, ", ");
}

void reject_unknown_keys(const pt::ptree& root) {
  static const std::map<std::string, std::set<std::string>> known = {
      {"simulation", {"t_max", "step", "seed", "realizations", "error_sign"}},
      {"objective", {"w1", "w2", "u_ss"}},
      {"plant",
       {"grid_fraction", "inertia", "damping", "storage_sign", "wtg", "stpg_collector",
        "stpg_turbine", "ae", "fc", "deg", "fess", "bess", "uc", "disconnected", "rate_limits"}},
      {"rate_limit_experiment", {"limits"}},
      {"wind", {"eta", "beta", "delta", "shaping", "schedule", "additive"}},
      {"solar", {"eta", "beta", "delta", "shaping", "schedule", "additive"}},
      {"load", {"eta", "beta", "delta", "shaping", "schedule", "additive"}},
      {"controller", {"derivative_tau", "band_low", "band_high", "band_order"}},
      {"pso",
       {"particles", "generations", "inertia_start", "inertia_end", "cognitive", "social",
        "velocity_clamp", "workers", "rng"}},
      {"bounds", {"gain_low", "gain_high", "order_low", "order_high"}},
  };
  for (const auto& [section, node] : root) {
    std::set<std::string> keys;
    if (const auto it = known.find(section); it != known.end()) {
      keys = it->second;
    } else {
      bool controller = false;
      for (ControllerKind kind :
           {ControllerKind::Pid, ControllerKind::FuzzyPid, ControllerKind::FuzzyFopid}) {
        if (section != controller_tag(kind)) continue;
        controller = true;
        for (std::string_view name : parameter_names(kind)) keys.emplace(name);
      }
      if (!controller) throw Error(ErrorCode::Config, fmt::format("unknown section [{}]", section));
    }
    if (node.empty() && !node.data().empty()) {
      throw Error(ErrorCode::Config, fmt::format("key '{}' outside any section", section));
    }
    for (const auto& [key, value] : node) {
      if (!keys.count(key)) {
        throw Error(ErrorCode::Config, fmt::format("unknown key '{}' in [{}]", key, section));
      }
    }
  }
}

class Section {
 public:
  Section(const pt::ptree& root, const std::string& name) : name_(name) {
    if (auto child = root.get_child_optional(name)) node_ = &*child;
  }

  bool present() const { return node_ != nullptr; }

  std::optional<std::string> str(const std::string& key) const {
    if (!node_) return std::nullopt;
    if (auto v = node_->get_optional<std::string>(key)) {
      return boost::algorithm::trim_copy(*v);
    }
    return std::nullopt;
  }

  void number(const std::string& key, double& target) const {
    if (auto v = str(key)) target = parse_number(*v);
  }

  template <class Int>
  void integer(const std::string& key, Int& target) const {
    if (auto v = str(key)) {
      const double d = parse_number(*v);
      if (d != std::floor(d) || d < 0.0) {
        throw Error(ErrorCode::Config, fmt::format("[{}] {} must be a non-negative integer", name_, key));
      }
      target = static_cast<Int>(d);
    }
  }

 private:
  std::string name_;
  const pt::ptree* node_ = nullptr;
};

void apply_profile(const Section& sec, ProfileSpec& spec) {
  sec.number("eta", spec.eta);
  sec.number("beta", spec.beta);
  sec.number("delta", spec.delta);
  if (auto v = sec.str("shaping")) {
    const auto lags = parse_lags(*v);
    spec.shaping = lags.empty() ? static_gain(0.0) : parallel_lags(lags);
  }
  if (auto v = sec.str("schedule")) spec.schedule = parse_schedule(*v);
  if (auto v = sec.str("additive")) spec.additive = parse_schedule(*v);
}

void render_profile(std::ostringstream& os, const std::string& name, const ProfileSpec& spec) {
  os << "\n[" << name << "]\n";
  os << "eta = " << format_number(spec.eta) << "\n";
  os << "beta = " << format_number(spec.beta) << "\n";
  os << "delta = " << format_number(spec.delta) << "\n";
  os << "shaping = " << render_lags(spec.shaping) << "\n";
  os << "schedule = " << render_schedule(spec.schedule) << "\n";
  os << "additive = " << render_schedule(spec.additive) << "\n";
}

ControllerParams params_from_section(ControllerKind kind, const Section& sec) {
  const auto names = parameter_names(kind);
  std::vector<double> values(names.size(), 0.0);
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string key(names[i]);
    auto v = sec.str(key);
    if (!v) {
      throw Error(ErrorCode::Config,
                  fmt::format("{} parameters missing '{}'", controller_tag(kind), key));
    }
    values[i] = parse_number(*v);
  }
  ControllerParams p = from_vector(kind, values);
  validate(p);
  return p;
}

}  // namespace

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return fmt::format("{}", v);
}

double parse_number(const std::string& raw) {
  const std::string s = boost::algorithm::trim_copy(raw);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (!s.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::Config, fmt::format("cannot parse number '{}'", raw));
  }
  return v;
}

Bounds SearchBounds::for_controller(ControllerKind kind) const {
  Bounds b;
  for (std::string_view name : parameter_names(kind)) {
    const bool order = name == "lambda" || name == "mu";
    b.lower.push_back(order ? order_low : gain_low);
    b.upper.push_back(order ? order_high : gain_high);
  }
  return b;
}

void Scenario::validate() const {
  sim.validate();
  swarm.validate();
  if (!(bounds.gain_low >= 0.0 && bounds.gain_low <= bounds.gain_high)) {
    throw Error(ErrorCode::Config, "gain bounds must satisfy 0 <= low <= high");
  }
  if (!(bounds.order_low > 0.0 && bounds.order_low <= bounds.order_high &&
        bounds.order_high <= 1.0)) {
    throw Error(ErrorCode::Config, "order bounds must satisfy 0 < low <= high <= 1");
  }
  for (const auto& [kind, p] : controllers) hybridlfc::validate(p);
  for (const auto& [c, v] : rate_limits) {
    if (!(v > 0.0)) throw Error(ErrorCode::Config, "rate limits must be > 0");
  }
}

Scenario default_scenario() {
  Scenario s;
  s.controllers[ControllerKind::Pid] = PidParams{2.04, 0.64, 0.61};
  s.controllers[ControllerKind::FuzzyPid] = FuzzyPidParams{0.06, 0.02, 7.64, 23.45};
  s.controllers[ControllerKind::FuzzyFopid] = FuzzyFopidParams{0.22, 0.25, 3.17, 4.00, 0.99, 0.84};
  return s;
}

Scenario parse_scenario(const std::string& text) {
  pt::ptree root;
  std::istringstream is(text);
  try {
    pt::ini_parser::read_ini(is, root);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::Config, fmt::format("scenario parse error: {}", e.what()));
  }

  reject_unknown_keys(root);
  Scenario s = default_scenario();

  const Section simulation(root, "simulation");
  simulation.number("t_max", s.sim.t_max);
  simulation.number("step", s.sim.step);
  simulation.integer("seed", s.sim.seed);
  simulation.integer("realizations", s.sim.realizations);
  simulation.number("error_sign", s.sim.error_sign);

  const Section objective(root, "objective");
  objective.number("w1", s.sim.weights.frequency);
  objective.number("w2", s.sim.weights.control);
  if (auto v = objective.str("u_ss")) s.sim.u_ss = parse_schedule(*v);

  const Section plant(root, "plant");
  PlantConfig& pc = s.sim.plant;
  plant.number("grid_fraction", pc.grid_fraction);
  plant.number("inertia", pc.inertia);
  plant.number("damping", pc.damping);
  plant.number("storage_sign", pc.storage_sign);
  const std::pair<const char*, FirstOrderLag*> lags[] = {
      {"wtg", &pc.wtg}, {"stpg_collector", &pc.solar_collector},
      {"stpg_turbine", &pc.solar_turbine}, {"ae", &pc.ae}, {"fc", &pc.fc},
      {"deg", &pc.deg}, {"fess", &pc.fess}, {"bess", &pc.bess}, {"uc", &pc.uc}};
  for (const auto& [key, lag] : lags) {
    if (auto v = plant.str(key)) *lag = parse_lag(*v, *lag);
  }
  if (auto v = plant.str("disconnected")) {
    for (const auto& name : split_list(*v, ',')) pc.set_connected(parse_component(name), false);
  }
  if (auto v = plant.str("rate_limits")) {
    for (const auto& [c, limit] : parse_limits(*v)) pc.lag(c).rate_limit = limit;
  }

  const Section experiment(root, "rate_limit_experiment");
  if (auto v = experiment.str("limits")) s.rate_limits = parse_limits(*v);

  apply_profile(Section(root, "wind"), s.sim.wind);
  apply_profile(Section(root, "solar"), s.sim.solar);
  apply_profile(Section(root, "load"), s.sim.load);

  const Section controller(root, "controller");
  controller.number("derivative_tau", s.sim.controller.derivative_tau);
  controller.number("band_low", s.sim.controller.band.low);
  controller.number("band_high", s.sim.controller.band.high);
  controller.integer("band_order", s.sim.controller.band.order_n);

  const Section pso(root, "pso");
  pso.integer("particles", s.swarm.particles);
  pso.integer("generations", s.swarm.generations);
  pso.number("inertia_start", s.swarm.inertia_start);
  pso.number("inertia_end", s.swarm.inertia_end);
  pso.number("cognitive", s.swarm.cognitive);
  pso.number("social", s.swarm.social);
  pso.number("velocity_clamp", s.swarm.velocity_clamp);
  pso.integer("workers", s.swarm.workers);
  if (auto v = pso.str("rng")) s.swarm.source = parse_random_source(*v);

  const Section bounds(root, "bounds");
  bounds.number("gain_low", s.bounds.gain_low);
  bounds.number("gain_high", s.bounds.gain_high);
  bounds.number("order_low", s.bounds.order_low);
  bounds.number("order_high", s.bounds.order_high);

  for (ControllerKind kind :
       {ControllerKind::Pid, ControllerKind::FuzzyPid, ControllerKind::FuzzyFopid}) {
    const Section sec(root, std::string(controller_tag(kind)));
    if (sec.present()) s.controllers[kind] = params_from_section(kind, sec);
  }

  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_text(path));
}

std::string render_scenario(const Scenario& s) {
  std::ostringstream os;
  const ScenarioConfig& c = s.sim;
  os << "[simulation]\n";
  os << "t_max = " << format_number(c.t_max) << "\n";
  os << "step = " << format_number(c.step) << "\n";
  os << "seed = " << c.seed << "\n";
  os << "realizations = " << c.realizations << "\n";
  os << "error_sign = " << format_number(c.error_sign) << "\n";

  os << "\n[objective]\n";
  os << "w1 = " << format_number(c.weights.frequency) << "\n";
  os << "w2 = " << format_number(c.weights.control) << "\n";
  os << "u_ss = " << render_schedule(c.u_ss) << "\n";

  const PlantConfig& pc = c.plant;
  os << "\n[plant]\n";
  os << "grid_fraction = " << format_number(pc.grid_fraction) << "\n";
  os << "inertia = " << format_number(pc.inertia) << "\n";
  os << "damping = " << format_number(pc.damping) << "\n";
  os << "storage_sign = " << format_number(pc.storage_sign) << "\n";
  os << "wtg = " << render_lag(pc.wtg) << "\n";
  os << "stpg_collector = " << render_lag(pc.solar_collector) << "\n";
  os << "stpg_turbine = " << render_lag(pc.solar_turbine) << "\n";
  os << "ae = " << render_lag(pc.ae) << "\n";
  os << "fc = " << render_lag(pc.fc) << "\n";
  os << "deg = " << render_lag(pc.deg) << "\n";
  os << "fess = " << render_lag(pc.fess) << "\n";
  os << "bess = " << render_lag(pc.bess) << "\n";
  os << "uc = " << render_lag(pc.uc) << "\n";
  std::vector<std::string> off;
  std::map<Component, double> active_limits;
  for (std::size_t i = 0; i < kComponentCount; ++i) {
    const auto comp = static_cast<Component>(i);
    if (!pc.is_connected(comp)) off.emplace_back(component_name(comp));
  }
  const Component limited[] = {Component::Wtg, Component::Ae, Component::Fc1,
                               Component::Deg, Component::Fess, Component::Bess,
                               Component::Uc};
  for (Component comp : limited) {
    if (pc.lag(comp).rate_limit) active_limits[comp] = *pc.lag(comp).rate_limit;
  }
  os << "disconnected = " << boost::algorithm::join(off, ", ") << "\n";
  os << "rate_limits = " << render_limits(active_limits) << "\n";

  os << "\n[rate_limit_experiment]\n";
  os << "limits = " << render_limits(s.rate_limits) << "\n";

  render_profile(os, "wind", c.wind);
  render_profile(os, "solar", c.solar);
  render_profile(os, "load", c.load);

  os << "\n[controller]\n";
  os << "derivative_tau = " << format_number(c.controller.derivative_tau) << "\n";
  os << "band_low = " << format_number(c.controller.band.low) << "\n";
  os << "band_high = " << format_number(c.controller.band.high) << "\n";
  os << "band_order = " << c.controller.band.order_n << "\n";

  os << "\n[pso]\n";
  os << "particles = " << s.swarm.particles << "\n";
  os << "generations = " << s.swarm.generations << "\n";
  os << "inertia_start = " << format_number(s.swarm.inertia_start) << "\n";
  os << "inertia_end = " << format_number(s.swarm.inertia_end) << "\n";
  os << "cognitive = " << format_number(s.swarm.cognitive) << "\n";
  os << "social = " << format_number(s.swarm.social) << "\n";
  os << "velocity_clamp = " << format_number(s.swarm.velocity_clamp) << "\n";
  os << "workers = " << s.swarm.workers << "\n";
  os << "rng = " << random_source_tag(s.swarm.source) << "\n";

  os << "\n[bounds]\n";
  os << "gain_low = " << format_number(s.bounds.gain_low) << "\n";
  os << "gain_high = " << format_number(s.bounds.gain_high) << "\n";
  os << "order_low = " << format_number(s.bounds.order_low) << "\n";
  os << "order_high = " << format_number(s.bounds.order_high) << "\n";

  for (const auto& [kind, params] : s.controllers) {
    os << "\n[" << controller_tag(kind) << "]\n";
    const auto names = parameter_names(kind);
    const auto values = to_vector(params);
    for (std::size_t i = 0; i < names.size(); ++i) {
      os << names[i] << " = " << format_number(values[i]) << "\n";
    }
  }
  return os.str();
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  pt::ptree root;
  std::istringstream is(text);
  try {
    pt::ini_parser::read_ini(is, root);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::Config, fmt::format("key-value parse error: {}", e.what()));
  }
  std::map<std::string, std::string> out;
  for (const auto& [key, node] : root) {
    if (!node.empty()) continue;  // sections are not part of the flat format
    out[key] = boost::algorithm::trim_copy(node.data());
  }
  return out;
}

ControllerParams parse_params(const std::string& text) {
  const auto kv = parse_key_values(text);
  const auto it = kv.find("controller");
  if (it == kv.end()) throw Error(ErrorCode::Config, "params file lacks 'controller'");
  const ControllerKind kind = parse_controller_tag(it->second);
  const auto names = parameter_names(kind);
  std::vector<double> values;
  for (std::string_view name : names) {
    const auto v = kv.find(std::string(name));
    if (v == kv.end()) {
      throw Error(ErrorCode::Config, fmt::format("params file lacks '{}'", name));
    }
    values.push_back(parse_number(v->second));
  }
  ControllerParams p = from_vector(kind, values);
  validate(p);
  return p;
}

ControllerParams load_params(const std::filesystem::path& path) {
  return parse_params(read_text(path));
}

std::string render_params(const ControllerParams& params,
                          const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ostringstream os;
  const ControllerKind kind = kind_of(params);
  os << "controller = " << controller_tag(kind) << "\n";
  const auto names = parameter_names(kind);
  const auto values = to_vector(params);
  for (std::size_t i = 0; i < names.size(); ++i) {
    os << names[i] << " = " << format_number(values[i]) << "\n";
  }
  for (const auto& [k, v] : extra) os << k << " = " << v << "\n";
  return os.str();
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Config, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Config, fmt::format("cannot write '{}'", path.string()));
  out << text;
}

}  // namespace hybridlfc
