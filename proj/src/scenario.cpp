#include "biorx/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace biorx {

using nlohmann::json;

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::kGamma: return "gamma";
    case SweepVariable::kEta: return "eta";
    case SweepVariable::kN: return "N";
    case SweepVariable::kDt: return "dt";
  }
  return "gamma";
}

SweepVariable parse_sweep_variable(std::string_view name) {
  for (SweepVariable v : {SweepVariable::kGamma, SweepVariable::kEta, SweepVariable::kN, SweepVariable::kDt})
    if (to_string(v) == name) return v;
  throw std::invalid_argument("sweep.variable must be one of gamma, eta, N, dt");
}

void Scenario::validate() const {
  point.validate();
  if (trials < 0) throw std::invalid_argument("trials must be non-negative");
  if (threads < 0) throw std::invalid_argument("threads must be non-negative");
  if (sweep.values.empty()) throw std::invalid_argument("sweep.values must not be empty");
  for (double v : sweep.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("sweep.values must be finite");
    apply_sweep(*this, v).validate();
  }
}

OperatingPoint apply_sweep(const Scenario& scn, double value) {
  OperatingPoint op = scn.point;
  switch (scn.sweep.variable) {
    case SweepVariable::kGamma:
      op.gamma = value;
      break;
    case SweepVariable::kEta:
      if (!(value > 0.0)) throw std::invalid_argument("sweep.values: eta must be positive");
      op.i.k_minus = value * op.m.K_D() * op.i.k_plus;
      break;
    case SweepVariable::kN:
      if (value != std::floor(value) || value > 1e9)
        throw std::invalid_argument("sweep.values: N must be an integer");
      op.N = static_cast<int>(value);
      break;
    case SweepVariable::kDt:
      op.dt = value;
      break;
  }
  return op;
}

namespace {

template <class T>
T get(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(key + ": wrong type");
  }
}

void read_number(const json& obj, const std::string& key, double& out, std::set<std::string>& seen) {
  if (!obj.contains(key)) return;
  seen.insert(key);
  if (!obj.at(key).is_number()) throw std::invalid_argument(key + ": expected a number");
  out = obj.at(key).get<double>();
}

void read_int(const json& obj, const std::string& key, int& out, std::set<std::string>& seen) {
  if (!obj.contains(key)) return;
  seen.insert(key);
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw std::invalid_argument(key + ": expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw std::invalid_argument(key + ": out of range");
  out = static_cast<int>(x);
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (root.is_null()) root = json::object();
  if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");

  Scenario s;
  OperatingPoint& op = s.point;
  std::set<std::string> seen;

  read_number(root, "T", op.channel.T, seen);
  read_number(root, "h_ch", op.channel.h_ch, seen);
  read_number(root, "l_ch", op.channel.l_ch, seen);
  read_number(root, "u", op.channel.u, seen);
  read_number(root, "x_R", op.channel.x_R, seen);
  read_number(root, "D_0", op.channel.D_0, seen);
  read_number(root, "c_ion", op.receiver.c_ion, seen);
  read_number(root, "eps_rel", op.receiver.eps_rel, seen);
  read_number(root, "k_plus_m", op.m.k_plus, seen);
  read_number(root, "k_plus_i", op.i.k_plus, seen);
  read_number(root, "k_minus_m", op.m.k_minus, seen);
  read_number(root, "k_minus_i", op.i.k_minus, seen);
  read_number(root, "N_e", op.receiver.N_e, seen);
  read_int(root, "N_r", op.receiver.N_r, seen);
  read_number(root, "r", op.receiver.r, seen);
  read_number(root, "g", op.receiver.g, seen);
  read_number(root, "l_gr", op.receiver.l_gr, seen);
  read_number(root, "c_q", op.receiver.c_q, seen);
  op.receiver.A_gr = op.receiver.l_gr * op.receiver.l_gr;
  read_number(root, "A_gr", op.receiver.A_gr, seen);
  read_number(root, "S_f1Hz", op.receiver.S_f1Hz, seen);
  read_number(root, "beta", op.receiver.beta, seen);
  read_int(root, "N", op.N, seen);
  read_number(root, "dt", op.dt, seen);
  read_number(root, "gamma", op.gamma, seen);
  read_number(root, "mu_sigma_ratio", op.mu_sigma_ratio, seen);
  read_number(root, "tdd_window", op.tdd_window, seen);
  read_int(root, "oversample", op.oversample, seen);
  read_int(root, "trials", s.trials, seen);
  read_int(root, "threads", s.threads, seen);

  if (root.contains("N_m")) {
    seen.insert("N_m");
    const json& v = root.at("N_m");
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw std::invalid_argument("N_m: expected [N_m0, N_m1]");
    op.N_m0 = v[0].get<double>();
    op.N_m1 = v[1].get<double>();
  }
  if (root.contains("threshold_shape")) {
    seen.insert("threshold_shape");
    const auto shape = get<std::string>(root, "threshold_shape");
    if (shape == "printed") {
      op.threshold_shape = BindingShape::kPrinted;
    } else if (shape == "lorentzian") {
      op.threshold_shape = BindingShape::kLorentzian;
    } else {
      throw std::invalid_argument("threshold_shape: expected \"printed\" or \"lorentzian\"");
    }
  }
  if (root.contains("seed")) {
    seen.insert("seed");
    const json& v = root.at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      throw std::invalid_argument("seed: expected a non-negative integer");
    s.seed = v.get<std::uint64_t>();
  }
  if (root.contains("sweep")) {
    seen.insert("sweep");
    const json& sw = root.at("sweep");
    if (!sw.is_object()) throw std::invalid_argument("sweep: expected an object");
    for (const auto& [key, _] : sw.items())
      if (key != "variable" && key != "values") throw std::invalid_argument("sweep." + key + ": unknown key");
    if (sw.contains("variable")) s.sweep.variable = parse_sweep_variable(get<std::string>(sw, "variable"));
    if (sw.contains("values")) {
      const json& v = sw.at("values");
      if (!v.is_array()) throw std::invalid_argument("sweep.values: expected an array of numbers");
      s.sweep.values.clear();
      for (const auto& x : v) {
        if (!x.is_number()) throw std::invalid_argument("sweep.values: expected an array of numbers");
        s.sweep.values.push_back(x.get<double>());
      }
    }
  }

  for (const auto& [key, _] : root.items())
    if (!seen.count(key)) throw std::invalid_argument(key + ": unknown key");

  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string to_json(const Scenario& s) {
  const OperatingPoint& op = s.point;
  json j = json::object();
  j["T"] = op.channel.T;
  j["h_ch"] = op.channel.h_ch;
  j["l_ch"] = op.channel.l_ch;
  j["u"] = op.channel.u;
  j["x_R"] = op.channel.x_R;
  j["D_0"] = op.channel.D_0;
  j["c_ion"] = op.receiver.c_ion;
  j["eps_rel"] = op.receiver.eps_rel;
  j["k_plus_m"] = op.m.k_plus;
  j["k_plus_i"] = op.i.k_plus;
  j["k_minus_m"] = op.m.k_minus;
  j["k_minus_i"] = op.i.k_minus;
  j["N_e"] = op.receiver.N_e;
  j["N_r"] = op.receiver.N_r;
  j["r"] = op.receiver.r;
  j["g"] = op.receiver.g;
  j["l_gr"] = op.receiver.l_gr;
  j["A_gr"] = op.receiver.A_gr;
  j["c_q"] = op.receiver.c_q;
  j["S_f1Hz"] = op.receiver.S_f1Hz;
  j["beta"] = op.receiver.beta;
  j["N_m"] = {op.N_m0, op.N_m1};
  j["N"] = op.N;
  j["dt"] = op.dt;
  j["gamma"] = op.gamma;
  j["mu_sigma_ratio"] = op.mu_sigma_ratio;
  j["tdd_window"] = op.tdd_window;
  j["threshold_shape"] = op.threshold_shape == BindingShape::kPrinted ? "printed" : "lorentzian";
  j["oversample"] = op.oversample;
  j["sweep"] = {{"variable", std::string(to_string(s.sweep.variable))}, {"values", s.sweep.values}};
  j["trials"] = s.trials;
  j["seed"] = s.seed;
  j["threads"] = s.threads;
  return j.dump(2) + "\n";
}

}  // namespace biorx
