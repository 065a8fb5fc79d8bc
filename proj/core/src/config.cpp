#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdris/scenario.hpp"

namespace bdris {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_key(const std::string& what, const std::string& key) {
  throw std::runtime_error("config: " + what + " key '" + key + "'");
}

double as_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  bad_key("invalid value for", key);
}

long long as_int(const std::string& key, const std::string& value) {
  const double v = as_double(key, value);
  const long long i = static_cast<long long>(v);
  if (static_cast<double>(i) != v) bad_key("invalid value for", key);
  return i;
}

std::vector<Vec3> as_positions(const std::string& key,
                               const std::string& value) {
  std::string cleaned = value;
  for (char& ch : cleaned) {
    if (ch == ',' || ch == ';' || ch == '[' || ch == ']') ch = ' ';
  }
  std::istringstream in(cleaned);
  std::vector<double> nums;
  double v = 0.0;
  while (in >> v) nums.push_back(v);
  if (!in.eof() || nums.empty() || nums.size() % 3 != 0) {
    bad_key("invalid value for", key);
  }
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < nums.size(); i += 3) {
    out.push_back({nums[i], nums[i + 1], nums[i + 2]});
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(const std::vector<Vec3>& pos) {
  std::string out;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (i) out += " ; ";
    out += fmt(pos[i].x) + " " + fmt(pos[i].y) + " " + fmt(pos[i].z);
  }
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: expected 'key = value', got '" + line +
                               "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) bad_key("invalid value for", key);
    if (kv.count(key)) bad_key("duplicate", key);
    kv[key] = value;
  }

  Scenario s;
  bool tau_set = false;
  double p_dbm = 25.0, noise_dbm = -90.0;
  std::vector<Vec3> bs_pos, ris_pos, ue_pos;

  auto take = [&kv](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  static const std::vector<std::string> known = {
      "scheme",        "Q",           "N",          "M",
      "K",             "D",           "n_cp",       "fc_hz",
      "bw_hz",         "p_dbm",       "noise_dbm",  "alpha_bs_ue",
      "alpha_bs_ris",  "alpha_ris_ue", "square_width_m", "bs_positions",
      "ris_positions", "ue_positions", "r_ohm",     "l1_h",
      "l2_h",          "z0_ohm",      "c_min_f",    "c_max_f",
      "tau",           "tau_s",       "eps",        "rho",
      "t_max",         "update",      "seed"};
  for (const auto& [key, value] : kv) {
    (void)value;
    bool ok = false;
    for (const auto& k : known) ok = ok || k == key;
    if (!ok) bad_key("unknown", key);
  }
  for (const char* req : {"Q", "N", "M", "K", "D"}) {
    if (!take(req)) bad_key("missing required", req);
  }

  if (const auto* v = take("scheme")) s.scheme = parse_scheme(*v);
  s.users = static_cast<int>(as_int("Q", *take("Q")));
  s.bs_antennas = static_cast<int>(as_int("N", *take("N")));
  s.ris_elements = static_cast<int>(as_int("M", *take("M")));
  s.subcarriers = static_cast<int>(as_int("K", *take("K")));
  s.delay_taps = static_cast<int>(as_int("D", *take("D")));
  if (const auto* v = take("n_cp"))
    s.cyclic_prefix = static_cast<int>(as_int("n_cp", *v));
  if (const auto* v = take("fc_hz")) s.fc_hz = as_double("fc_hz", *v);
  if (const auto* v = take("bw_hz")) s.bw_hz = as_double("bw_hz", *v);
  if (const auto* v = take("p_dbm")) p_dbm = as_double("p_dbm", *v);
  if (const auto* v = take("noise_dbm"))
    noise_dbm = as_double("noise_dbm", *v);
  if (const auto* v = take("alpha_bs_ue"))
    s.alpha_bs_ue = as_double("alpha_bs_ue", *v);
  if (const auto* v = take("alpha_bs_ris"))
    s.alpha_bs_ris = as_double("alpha_bs_ris", *v);
  if (const auto* v = take("alpha_ris_ue"))
    s.alpha_ris_ue = as_double("alpha_ris_ue", *v);
  if (const auto* v = take("square_width_m"))
    s.square_width_m = as_double("square_width_m", *v);
  if (const auto* v = take("bs_positions"))
    bs_pos = as_positions("bs_positions", *v);
  if (const auto* v = take("ris_positions"))
    ris_pos = as_positions("ris_positions", *v);
  if (const auto* v = take("ue_positions"))
    ue_pos = as_positions("ue_positions", *v);
  if (const auto* v = take("r_ohm")) s.circuit.r_ohm = as_double("r_ohm", *v);
  if (const auto* v = take("l1_h")) s.circuit.l1_h = as_double("l1_h", *v);
  if (const auto* v = take("l2_h")) s.circuit.l2_h = as_double("l2_h", *v);
  if (const auto* v = take("z0_ohm"))
    s.circuit.z0_ohm = as_double("z0_ohm", *v);
  if (const auto* v = take("c_min_f"))
    s.circuit.c_min_f = as_double("c_min_f", *v);
  if (const auto* v = take("c_max_f"))
    s.circuit.c_max_f = as_double("c_max_f", *v);
  if (const auto* v = take("tau")) {
    s.tau = as_double("tau", *v);
    tau_set = true;
  }
  if (const auto* v = take("tau_s")) s.tau_s = as_double("tau_s", *v);
  if (const auto* v = take("eps")) s.eps = as_double("eps", *v);
  if (const auto* v = take("rho")) s.rho = as_double("rho", *v);
  if (const auto* v = take("t_max"))
    s.t_max = static_cast<int>(as_int("t_max", *v));
  if (const auto* v = take("update")) {
    if (*v == "jacobi") {
      s.gauss_seidel = false;
    } else if (*v == "gauss-seidel") {
      s.gauss_seidel = true;
    } else {
      bad_key("invalid value for", "update");
    }
  }
  if (const auto* v = take("seed"))
    s.seed = static_cast<std::uint64_t>(as_int("seed", *v));

  s.power_w = dbm_to_watt(p_dbm);
  s.noise_w = dbm_to_watt(noise_dbm);
  // Cooperation benchmarks run with a lighter regularizer by default.
  if (!tau_set) s.tau = s.scheme.pricing ? 1.85 : 1.25;

  s.geometry = default_geometry(s.users, s.square_width_m);
  auto patch = [&](const char* key, std::vector<Vec3>& pos,
                   std::vector<Vec3>& dst) {
    if (pos.empty()) return;
    if (pos.size() != static_cast<std::size_t>(s.users)) {
      bad_key("wrong position count for", key);
    }
    dst = pos;
  };
  patch("bs_positions", bs_pos, s.geometry.bs);
  patch("ris_positions", ris_pos, s.geometry.ris);
  patch("ue_positions", ue_pos, s.geometry.ue);

  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string canonical_config(const Scenario& s) {
  std::ostringstream out;
  out << "# canonical scenario configuration\n";
  out << "scheme = " << scheme_name(s.scheme) << "\n";
  out << "Q = " << s.users << "\n";
  out << "N = " << s.bs_antennas << "\n";
  out << "M = " << s.ris_elements << "\n";
  out << "K = " << s.subcarriers << "\n";
  out << "D = " << s.delay_taps << "\n";
  out << "n_cp = " << s.cyclic_prefix << "\n";
  out << "fc_hz = " << fmt(s.fc_hz) << "\n";
  out << "bw_hz = " << fmt(s.bw_hz) << "\n";
  out << "p_dbm = " << fmt(watt_to_dbm(s.power_w)) << "\n";
  out << "noise_dbm = " << fmt(watt_to_dbm(s.noise_w)) << "\n";
  out << "alpha_bs_ue = " << fmt(s.alpha_bs_ue) << "\n";
  out << "alpha_bs_ris = " << fmt(s.alpha_bs_ris) << "\n";
  out << "alpha_ris_ue = " << fmt(s.alpha_ris_ue) << "\n";
  out << "square_width_m = " << fmt(s.square_width_m) << "\n";
  out << "bs_positions = " << fmt(s.geometry.bs) << "\n";
  out << "ris_positions = " << fmt(s.geometry.ris) << "\n";
  out << "ue_positions = " << fmt(s.geometry.ue) << "\n";
  out << "r_ohm = " << fmt(s.circuit.r_ohm) << "\n";
  out << "l1_h = " << fmt(s.circuit.l1_h) << "\n";
  out << "l2_h = " << fmt(s.circuit.l2_h) << "\n";
  out << "z0_ohm = " << fmt(s.circuit.z0_ohm) << "\n";
  out << "c_min_f = " << fmt(s.circuit.c_min_f) << "\n";
  out << "c_max_f = " << fmt(s.circuit.c_max_f) << "\n";
  out << "tau = " << fmt(s.tau) << "\n";
  out << "tau_s = " << fmt(s.tau_s) << "\n";
  out << "eps = " << fmt(s.eps) << "\n";
  out << "rho = " << fmt(s.rho) << "\n";
  out << "t_max = " << s.t_max << "\n";
  out << "update = " << (s.gauss_seidel ? "gauss-seidel" : "jacobi") << "\n";
  out << "seed = " << s.seed << "\n";
  return out.str();
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("config: cannot write '" + path + "'");
  out << canonical_config(s);
}

}  // namespace bdris
