#include "mcrsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "mcrsim/error.hpp"
#include "mcrsim/numerics.hpp"

namespace mcrsim {

namespace {

using ToSi = double (*)(double);

double identity(double v) { return v; }
double per_km2(double v) { return v / 1e6; }
double dbm(double v) { return numerics::dbm_to_watts(v); }
double db(double v) { return numerics::db_to_linear(v); }
double mhz(double v) { return v * 1e6; }
double micro(double v) { return v / 1e6; }
double milli(double v) { return v / 1e3; }
double kilo(double v) { return v * 1e3; }
double mebibytes(double v) { return v * 1048576.0; }
double years(double v) { return v * 365.0 * 86400.0; }

struct UnitKey {
  std::string key;
  ToSi to_si;
};

enum class Kind { real, integer, paths };

struct Field {
  std::string name;
  Kind kind = Kind::real;
  std::vector<UnitKey> keys;  // keys.front() is the SI emission key
  std::function<double&(SystemModel&)> real;
  std::function<int&(SystemModel&)> integer;
  bool documented = true;
};

#define MCR_REAL(expr) [](SystemModel& m) -> double& { return m.expr; }
#define MCR_INT(expr) [](SystemModel& m) -> int& { return m.expr; }

std::vector<Field> build_fields() {
  std::vector<Field> f;
  auto real = [&](std::string name, std::vector<UnitKey> keys,
                  std::function<double&(SystemModel&)> ref, bool documented = true) {
    f.push_back({std::move(name), Kind::real, std::move(keys), std::move(ref), {}, documented});
  };
  auto integer = [&](std::string name, std::function<int&(SystemModel&)> ref,
                     bool documented = true) {
    Field field{name, Kind::integer, {{name, identity}}, {}, std::move(ref), documented};
    f.push_back(std::move(field));
  };
  auto density = [&](const std::string& n, std::function<double&(SystemModel&)> ref,
                     bool documented = true) {
    real(n, {{n + "_per_m2", identity}, {n + "_per_km2", per_km2}}, std::move(ref), documented);
  };
  auto power = [&](const std::string& n, std::function<double&(SystemModel&)> ref,
                   bool documented = true) {
    real(n, {{n + "_w", identity}, {n + "_dbm", dbm}}, std::move(ref), documented);
  };
  auto seconds = [&](const std::string& n, std::function<double&(SystemModel&)> ref,
                     bool documented = true) {
    real(n, {{n + "_s", identity}, {n + "_ms", milli}, {n + "_us", micro}},
         std::move(ref), documented);
  };

  density("lambda_m", MCR_REAL(network.lambda_m));
  density("lambda_s", MCR_REAL(network.lambda_s));
  density("lambda_u", MCR_REAL(network.lambda_u));
  density("lambda_e", MCR_REAL(network.lambda_e), false);
  power("p_m", MCR_REAL(network.p_m), false);
  power("p_s", MCR_REAL(network.p_s));
  power("p_e", MCR_REAL(network.p_e));
  power("p_u", MCR_REAL(network.p_u));
  integer("nt_u", MCR_INT(network.nt_u), false);
  integer("nr_m", MCR_INT(network.nr_m), false);
  integer("nt_m", MCR_INT(network.nt_m), false);
  integer("nr_e", MCR_INT(network.nr_e), false);
  integer("nt_s", MCR_INT(network.nt_s), false);
  integer("nr_u", MCR_INT(network.nr_u), false);
  power("theta1", MCR_REAL(network.theta1), false);
  real("theta2", {{"theta2_linear", identity}, {"theta2_db", db}},
       MCR_REAL(network.theta2), false);
  power("theta3", MCR_REAL(network.theta3), false);
  power("theta4", MCR_REAL(network.theta4), false);
  real("alpha1", {{"alpha1", identity}}, MCR_REAL(network.alpha1), false);
  real("alpha2", {{"alpha2", identity}}, MCR_REAL(network.alpha2), false);
  real("n0", {{"n0_w_per_hz", identity}, {"n0_dbm_per_hz", dbm}},
       MCR_REAL(network.n0));
  real("w_mmw", {{"w_mmw_hz", identity}, {"w_mmw_mhz", mhz}},
       MCR_REAL(network.w_mmw));
  seconds("tau_mmw", MCR_REAL(network.tau_mmw));
  real("r_mmw", {{"r_mmw_m", identity}}, MCR_REAL(network.r_mmw));
  real("sigma_db", {{"sigma_db", identity}}, MCR_REAL(network.sigma_db));
  real("packet_l", {{"packet_l_bytes", identity}}, MCR_REAL(network.packet_l));
  real("buffer_omega",
       {{"buffer_omega_bytes", identity}, {"buffer_omega_mb", mebibytes}},
       MCR_REAL(network.buffer_omega));
  real("l_fiber", {{"l_fiber_m", identity}, {"l_fiber_km", kilo}},
       MCR_REAL(network.l_fiber));
  real("v_fiber", {{"v_fiber_m_per_s", identity}}, MCR_REAL(network.v_fiber));
  real("mu", {{"mu_per_s", identity}}, MCR_REAL(network.mu));
  real("chi", {{"chi_m2_per_s", identity}}, MCR_REAL(network.chi));
  f.push_back({"b_paths", Kind::paths, {{"b_paths", identity}}, {}, {}, false});
  real("r_max", {{"r_max_m", identity}}, MCR_REAL(network.r_max));
  seconds("t_ul_req", MCR_REAL(network.t_ul_req), false);
  seconds("t_dl_deli", MCR_REAL(network.t_dl_deli), false);
  seconds("t_dl_as", MCR_REAL(network.t_dl_as), false);
  seconds("d_max", MCR_REAL(network.d_max), false);
  real("relay_factor", {{"relay_factor", identity}}, MCR_REAL(network.relay_factor));

  real("beta", {{"beta", identity}}, MCR_REAL(content.beta));
  integer("k_total", MCR_INT(content.k_total));
  integer("psi", MCR_INT(content.psi), false);

  real("a_m", {{"a_m", identity}}, MCR_REAL(energy.a_m));
  real("b_m", {{"b_m_w", identity}}, MCR_REAL(energy.b_m));
  real("a_s", {{"a_s", identity}}, MCR_REAL(energy.a_s));
  real("b_s", {{"b_s_w", identity}}, MCR_REAL(energy.b_s));
  real("a_e", {{"a_e", identity}}, MCR_REAL(energy.a_e));
  real("b_e", {{"b_e_w", identity}}, MCR_REAL(energy.b_e));
  for (const char* tier : {"m", "s", "e"}) {
    const std::string t = tier;
    auto life = [t](SystemModel& m) -> double& {
      return t == "m" ? m.energy.t_life_m : t == "s" ? m.energy.t_life_s : m.energy.t_life_e;
    };
    real("t_life_" + t, {{"t_life_" + t + "_s", identity}, {"t_life_" + t + "_years", years}},
         life);
  }
  for (const char* tier : {"m", "s", "e"}) {
    const std::string t = tier;
    auto em = [t](SystemModel& m) -> double& {
      return t == "m" ? m.energy.e_em_m : t == "s" ? m.energy.e_em_s : m.energy.e_em_e;
    };
    real("e_em_" + t, {{"e_em_" + t + "_j", identity}}, em, false);
  }
  real("e_storage", {{"e_storage_j", identity}}, MCR_REAL(energy.e_storage));
  return f;
}

#undef MCR_REAL
#undef MCR_INT

const std::vector<Field>& fields() {
  static const std::vector<Field> table = build_fields();
  return table;
}

struct KeyHit {
  const Field* field = nullptr;
  ToSi to_si = nullptr;
};

KeyHit lookup(std::string_view key) {
  for (const auto& field : fields())
    for (const auto& k : field.keys)
      if (k.key == key) return {&field, k.to_si};
  return {};
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw Error(ErrorCode::parse, "value for '" + key + "' is not a number: '" + text + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  int v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw Error(ErrorCode::parse, "value for '" + key + "' is not an integer: '" + text + "'");
  return v;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ConfigDocument ConfigDocument::parse(std::string_view text) {
  ConfigDocument doc;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) +
                                        ": expected 'key = value', got '" + body + "'");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw Error(ErrorCode::parse,
                  "line " + std::to_string(line_no) + ": empty key or value");
    }
    doc.set(std::move(key), std::move(value));
  }
  return doc;
}

ConfigDocument ConfigDocument::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void ConfigDocument::set(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
}

void ConfigDocument::set_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw Error(ErrorCode::parse, "expected KEY=VALUE, got '" + std::string(assignment) + "'");
  std::string key = trim(assignment.substr(0, eq));
  std::string value = trim(assignment.substr(eq + 1));
  if (key.empty() || value.empty())
    throw Error(ErrorCode::parse, "expected KEY=VALUE, got '" + std::string(assignment) + "'");
  set(std::move(key), std::move(value));
}

SystemModel load_config(const ConfigDocument& doc) {
  SystemModel model;
  std::vector<const Field*> touched;
  for (const auto& [key, value] : doc.entries()) {
    const KeyHit hit = lookup(key);
    if (!hit.field) {
      model.warnings.push_back("unknown key '" + key + "' ignored");
      continue;
    }
    const Field& field = *hit.field;
    switch (field.kind) {
      case Kind::real:
        field.real(model) = hit.to_si(parse_real(key, value));
        break;
      case Kind::integer:
        field.integer(model) = parse_int(key, value);
        break;
      case Kind::paths:
        if (value == "auto") {
          model.network.b_paths_auto = true;
        } else {
          model.network.b_paths_auto = false;
          model.network.b_paths = parse_int(key, value);
        }
        break;
    }
    touched.push_back(&field);
  }
  for (const auto& field : fields()) {
    if (field.documented) continue;
    if (std::find(touched.begin(), touched.end(), &field) == touched.end())
      model.assumed_defaults.push_back(field.name);
  }
  model.network.validate();
  model.content.validate();
  model.energy.validate();
  return model;
}

SystemModel load_config(std::string_view text) {
  return load_config(ConfigDocument::parse(text));
}

NetworkScenario load_scenario(std::string_view text) { return load_config(text).network; }

std::string emit_config(const SystemModel& model) {
  SystemModel copy = model;
  std::ostringstream out;
  for (const auto& field : fields()) {
    out << field.keys.front().key << " = ";
    switch (field.kind) {
      case Kind::real:
        out << format_real(field.real(copy));
        break;
      case Kind::integer:
        out << field.integer(copy);
        break;
      case Kind::paths:
        if (copy.network.b_paths_auto)
          out << "auto";
        else
          out << copy.network.b_paths;
        break;
    }
    out << '\n';
  }
  return out.str();
}

std::uint64_t scenario_hash(const SystemModel& model) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : emit_config(model)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

bool is_known_key(std::string_view key) { return lookup(key).field != nullptr; }

std::vector<std::string> known_keys() {
  std::vector<std::string> keys;
  for (const auto& field : fields())
    for (const auto& k : field.keys) keys.push_back(k.key);
  return keys;
}

}  // namespace mcrsim
