#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "swarmflow/cli.hpp"

namespace swarmflow {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"run", {"mode"}},
      {"model", {"gamma", "tau", "kappa", "alpha", "epsilon", "theta", "lambda"}},
      {"kernels", {"preset", "a"}},
      {"potential", {"kind", "a"}},
      {"comm_weight", {"kind", "value", "a", "cap"}},
      {"grid", {"n_cells", "convolution"}},
      {"initial",
       {"density", "sigma", "half_width", "separation", "velocity", "amplitude", "scale", "width", "kappa"}},
      {"control", {"cfl", "dt_max", "t_end", "report_every", "energy_tol"}},
      {"output", {"dir", "snapshot_every", "snapshot_format"}},
      {"study", {"eps_ladder", "n_cells"}},
      {"steady", {"kinetic_tol", "bd_tol", "window", "el_tol", "support_rel", "max_sweeps", "require_steady"}},
      {"picard", {"n_iters", "t_horizon", "dt", "max_restarts", "compare_solver", "compare_C"}},
      {"sweep", {"parameter", "values"}},
  };
  return s;
}

const std::set<std::string> kSweepable = {"gamma", "tau", "kappa", "alpha", "epsilon", "theta", "lambda",
                                          "cfl", "dt_max", "t_end", "n_cells"};

std::string suggest(const std::string& word, const std::set<std::string>& options) {
  std::string best;
  std::size_t bd = std::string::npos;
  for (const auto& o : options) {
    const auto d = edit_distance(word, o);
    if (d < bd) {
      bd = d;
      best = o;
    }
  }
  if (best.empty() || bd > std::max<std::size_t>(2, word.size() / 3)) return {};
  return " (did you mean '" + best + "'?)";
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

class Reader {
 public:
  explicit Reader(const pt::ptree& t) : tree_(t) {}

  bool has(const std::string& sec, const std::string& key) const {
    auto s = tree_.get_child_optional(sec);
    return s && s->get_child_optional(pt::ptree::path_type(key, '\0'));
  }
  std::string str(const std::string& sec, const std::string& key) const {
    return trim(tree_.get_child(sec).get_child(pt::ptree::path_type(key, '\0')).data());
  }
  double num(const std::string& sec, const std::string& key) const {
    const auto v = str(sec, key);
    try {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError("type mismatch: " + sec + "." + key + " expects a number, got '" + v + "'");
    }
  }
  long integer(const std::string& sec, const std::string& key) const {
    const double d = num(sec, key);
    if (d != std::floor(d)) throw ConfigError("type mismatch: " + sec + "." + key + " expects an integer");
    return static_cast<long>(d);
  }
  bool boolean(const std::string& sec, const std::string& key) const {
    const auto v = str(sec, key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("type mismatch: " + sec + "." + key + " expects true or false, got '" + v + "'");
  }
  std::vector<double> list(const std::string& sec, const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(str(sec, key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ConfigError("type mismatch: " + sec + "." + key + " expects a comma separated list of numbers");
      }
    }
    return out;
  }
  template <class T>
  void opt(const std::string& sec, const std::string& key, T& target) const {
    if (!has(sec, key)) return;
    if constexpr (std::is_same_v<T, double>) target = num(sec, key);
    else if constexpr (std::is_same_v<T, bool>) target = boolean(sec, key);
    else if constexpr (std::is_integral_v<T>) target = static_cast<T>(integer(sec, key));
    else target = str(sec, key);
  }
  double required(const std::string& sec, const std::string& key) const {
    if (!has(sec, key)) throw ConfigError("missing required key " + sec + "." + key);
    return num(sec, key);
  }

 private:
  const pt::ptree& tree_;
};

void check_keys(const pt::ptree& tree) {
  const auto& sch = schema();
  std::set<std::string> sections;
  for (const auto& kv : sch) sections.insert(kv.first);
  for (const auto& [sec, child] : tree) {
    auto it = sch.find(sec);
    if (it == sch.end()) {
      if (child.empty() && !child.data().empty())
        throw ConfigError("key '" + sec + "' appears outside of any section");
      throw ConfigError("unknown section [" + sec + "]" + suggest(sec, sections));
    }
    for (const auto& kv : child) {
      if (!it->second.count(kv.first)) {
        std::set<std::string> all;
        for (const auto& [s, keys] : sch)
          for (const auto& k : keys) all.insert(k);
        std::string hint = suggest(kv.first, it->second);
        if (hint.empty()) {
          for (const auto& [s, keys] : sch) {
            if (keys.count(kv.first)) {
              hint = " (key belongs in section [" + s + "])";
              break;
            }
          }
        }
        if (hint.empty()) hint = suggest(kv.first, all);
        throw ConfigError("unknown key '" + kv.first + "' in section [" + sec + "]" + hint);
      }
    }
  }
}

Mode parse_mode(const std::string& m) {
  if (m == "simulate") return Mode::simulate;
  if (m == "steady") return Mode::steady;
  if (m == "initdata-study") return Mode::initdata_study;
  if (m == "picard") return Mode::picard;
  if (m == "sweep") return Mode::sweep;
  throw ConfigError("unknown mode '" + m + "'" +
                    suggest(m, {"simulate", "steady", "initdata-study", "picard", "sweep"}));
}

}  // namespace

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::simulate: return "simulate";
    case Mode::steady: return "steady";
    case Mode::initdata_study: return "initdata-study";
    case Mode::picard: return "picard";
    case Mode::sweep: return "sweep";
  }
  return "?";
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  check_keys(tree);
  Reader r(tree);
  RunConfig c;

  if (r.has("run", "mode")) c.mode = parse_mode(r.str("run", "mode"));

  auto& m = c.model;
  m.gamma = r.required("model", "gamma");
  m.tau = r.required("model", "tau");
  m.kappa = r.required("model", "kappa");
  m.alpha = r.required("model", "alpha");
  m.epsilon = r.required("model", "epsilon");
  m.theta = r.required("model", "theta");
  if (r.has("model", "lambda")) {
    const auto v = r.str("model", "lambda");
    if (v == "auto") m.lambda.reset();
    else m.lambda = r.num("model", "lambda");
  }
  if (auto v = validate_params(m); !v.empty()) throw ConfigError("invalid model parameters: " + format_violations(v));

  if (r.has("kernels", "preset")) {
    const auto p = r.str("kernels", "preset");
    double a = 0.25;
    r.opt("kernels", "a", a);
    if (p == "remark-a") {
      c.potential = InteractionPotential::remark_a();
      c.comm_weight = CommunicationWeight::constant(1.0);
    } else if (p == "remark-b") {
      c.potential = InteractionPotential::remark_b(a);
      c.comm_weight = CommunicationWeight::power(a);
    } else {
      throw ConfigError("unknown kernel preset '" + p + "'" + suggest(p, {"remark-a", "remark-b"}));
    }
  }
  if (r.has("potential", "kind")) {
    const auto k = r.str("potential", "kind");
    double a = 0.25;
    r.opt("potential", "a", a);
    if (k == "remark-a" || k == "newtonian-quadratic") c.potential = InteractionPotential::remark_a();
    else if (k == "remark-b" || k == "newtonian-power") c.potential = InteractionPotential::remark_b(a);
    else if (k == "zero") c.potential = InteractionPotential::zero();
    else if (k == "quadratic") c.potential = InteractionPotential::quadratic_only();
    else
      throw ConfigError("unknown potential kind '" + k + "'" +
                        suggest(k, {"remark-a", "remark-b", "zero", "quadratic"}));
  }
  if (r.has("comm_weight", "kind")) {
    const auto k = r.str("comm_weight", "kind");
    if (k == "constant") {
      double v = 1.0;
      r.opt("comm_weight", "value", v);
      if (v < 0.0) throw ConfigError("comm_weight.value must be nonnegative");
      c.comm_weight = CommunicationWeight::constant(v);
    } else if (k == "power") {
      double a = 0.25;
      r.opt("comm_weight", "a", a);
      c.comm_weight = CommunicationWeight::power(a);
    } else if (k == "zero") {
      c.comm_weight = CommunicationWeight::zero();
    } else {
      throw ConfigError("unknown comm_weight kind '" + k + "'" + suggest(k, {"constant", "power", "zero"}));
    }
  }
  if (r.has("comm_weight", "cap")) {
    const double cap = r.num("comm_weight", "cap");
    if (!(cap > 0.0)) throw ConfigError("comm_weight.cap must be positive");
    c.comm_weight.cap = cap;
  }

  c.n_cells = static_cast<int>(r.required("grid", "n_cells"));
  if (r.num("grid", "n_cells") != c.n_cells) throw ConfigError("type mismatch: grid.n_cells expects an integer");
  if (c.n_cells < 8) throw ConfigError("grid.n_cells must be at least 8");
  if (r.has("grid", "convolution")) {
    const auto v = r.str("grid", "convolution");
    if (v == "fft") c.convolution = ConvMethod::fft;
    else if (v == "direct") c.convolution = ConvMethod::direct;
    else throw ConfigError("grid.convolution must be fft or direct");
  }

  auto& ini = c.initial;
  ini.kappa = m.kappa;
  if (r.has("initial", "density")) {
    const auto d = r.str("initial", "density");
    if (d == "gaussian") ini.rho0 = DensityProfile::gaussian(0.2);
    else if (d == "compact_bump") ini.rho0 = DensityProfile::compact_bump(0.5);
    else if (d == "double_bump") ini.rho0 = DensityProfile::double_bump(0.25, 0.1);
    else
      throw ConfigError("unknown initial density '" + d + "'" +
                        suggest(d, {"gaussian", "compact_bump", "double_bump"}));
  }
  r.opt("initial", "sigma", ini.rho0.sigma);
  r.opt("initial", "half_width", ini.rho0.half_width);
  r.opt("initial", "separation", ini.rho0.separation);
  if (!(ini.rho0.sigma > 0.0 && ini.rho0.half_width > 0.0)) throw ConfigError("initial profile widths must be positive");
  if (r.has("initial", "velocity")) {
    const auto v = r.str("initial", "velocity");
    if (v == "zero") ini.u0 = VelocityProfile::zero();
    else if (v == "tanh_bump") ini.u0 = VelocityProfile::tanh_bump(0.5);
    else throw ConfigError("unknown initial velocity '" + v + "'" + suggest(v, {"zero", "tanh_bump"}));
  }
  r.opt("initial", "amplitude", ini.u0.amplitude);
  r.opt("initial", "scale", ini.u0.scale);
  r.opt("initial", "width", ini.u0.width);
  if (!(ini.u0.scale > 0.0 && ini.u0.width > 0.0)) throw ConfigError("initial velocity lengths must be positive");

  r.opt("control", "cfl", c.control.cfl);
  r.opt("control", "dt_max", c.control.dt_max);
  r.opt("control", "t_end", c.control.t_end);
  r.opt("control", "report_every", c.control.report_every);
  r.opt("control", "energy_tol", c.energy_tol);
  validate_control(c.control);

  r.opt("output", "dir", c.output.dir);
  r.opt("output", "snapshot_every", c.output.snapshot_every);
  if (r.has("output", "snapshot_format")) {
    const auto f = r.str("output", "snapshot_format");
    if (f != "text" && f != "binary") throw ConfigError("output.snapshot_format must be text or binary");
    c.output.binary_snapshots = f == "binary";
  }

  if (r.has("study", "eps_ladder")) c.study.eps_ladder = r.list("study", "eps_ladder");
  r.opt("study", "n_cells", c.study.n_cells);

  r.opt("steady", "kinetic_tol", c.steady.tolerances.kinetic);
  r.opt("steady", "bd_tol", c.steady.tolerances.bd_grad);
  r.opt("steady", "window", c.steady.tolerances.window);
  r.opt("steady", "el_tol", c.steady.el_tol);
  r.opt("steady", "support_rel", c.steady.support_rel);
  r.opt("steady", "max_sweeps", c.steady.max_sweeps);
  r.opt("steady", "require_steady", c.steady.require_steady);

  r.opt("picard", "n_iters", c.picard.picard.n_iters);
  r.opt("picard", "t_horizon", c.picard.picard.t_horizon);
  r.opt("picard", "dt", c.picard.picard.dt);
  r.opt("picard", "max_restarts", c.picard.picard.max_restarts);
  r.opt("picard", "compare_solver", c.picard.compare_solver);
  r.opt("picard", "compare_C", c.picard.compare_C);

  if (r.has("sweep", "parameter")) {
    c.sweep.parameter = r.str("sweep", "parameter");
    if (!kSweepable.count(c.sweep.parameter))
      throw ConfigError("sweep.parameter '" + c.sweep.parameter + "' is not sweepable" +
                        suggest(c.sweep.parameter, kSweepable));
  }
  if (r.has("sweep", "values")) c.sweep.values = r.list("sweep", "values");
  if (c.mode == Mode::sweep && (c.sweep.parameter.empty() || c.sweep.values.empty()))
    throw ConfigError("sweep mode needs sweep.parameter and sweep.values");
  if (c.mode == Mode::sweep) {
    for (double v : c.sweep.values) {
      RunConfig probe = c;
      set_parameter(probe, c.sweep.parameter, v);
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void set_parameter(RunConfig& c, const std::string& name, double v) {
  auto& m = c.model;
  if (name == "gamma") m.gamma = v;
  else if (name == "tau") m.tau = v;
  else if (name == "kappa") m.kappa = v, c.initial.kappa = v;
  else if (name == "alpha") m.alpha = v;
  else if (name == "epsilon") m.epsilon = v;
  else if (name == "theta") m.theta = v;
  else if (name == "lambda") m.lambda = v;
  else if (name == "cfl") c.control.cfl = v;
  else if (name == "dt_max") c.control.dt_max = v;
  else if (name == "t_end") c.control.t_end = v;
  else if (name == "n_cells") c.n_cells = static_cast<int>(v);
  else throw ConfigError("unknown sweep parameter '" + name + "'");
  if (auto viol = validate_params(m); !viol.empty())
    throw ConfigError("sweep value " + std::to_string(v) + " for " + name + ": " + format_violations(viol));
  validate_control(c.control);
  if (c.n_cells < 8) throw ConfigError("sweep n_cells must be at least 8");
}

}  // namespace swarmflow
