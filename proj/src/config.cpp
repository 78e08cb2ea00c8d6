#include "szego/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace szego::config {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + (path.empty() ? k : path + "." + k) + "'");
}

template <class T>
T get(const json& j, const std::string& key, const std::string& path, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key + ": wrong type");
  }
}

cd get_complex(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  if (v.is_object()) {
    check_keys(v, path, {"re", "im"});
    if (!v.contains("re") || !v.contains("im") || !v["re"].is_number() || !v["im"].is_number())
      throw ConfigError(path + ": expected numeric re and im");
    return {v["re"].get<double>(), v["im"].get<double>()};
  }
  throw ConfigError(path + ": expected a complex number ([re, im] or {re, im})");
}

std::string line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

hardy::RationalDatum parse_datum(const json& j) {
  check_keys(j, "datum", {"shape", "poles", "residues"});
  hardy::RationalDatum d;
  if (j.contains("shape")) {
    const json& s = j["shape"];
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer())
      throw ConfigError("datum.shape: expected [rows, cols]");
    d.rows = s[0].get<int>();
    d.cols = s[1].get<int>();
    if (d.rows < 1 || d.cols < 1) throw ConfigError("datum.shape: dimensions must be positive");
  }
  const json poles = j.value("poles", json::array());
  const json res = j.value("residues", json::array());
  if (!poles.is_array() || !res.is_array()) throw ConfigError("datum: poles and residues must be lists");
  if (poles.size() != res.size()) throw ConfigError("datum: poles and residues differ in length");
  for (std::size_t p = 0; p < poles.size(); ++p) {
    const std::string pp = "datum.poles[" + std::to_string(p) + "]";
    d.poles.push_back(get_complex(poles[p], pp));
    const std::string rp = "datum.residues[" + std::to_string(p) + "]";
    const json& r = res[p];
    Mat a(d.rows, d.cols);
    if (d.rows * d.cols == 1 && !(r.is_array() && r.size() == 1)) {
      a(0, 0) = get_complex(r, rp);
    } else {
      if (!r.is_array() || static_cast<int>(r.size()) != d.rows * d.cols)
        throw ConfigError(rp + ": expected " + std::to_string(d.rows * d.cols) + " row-major entries");
      for (int e = 0; e < d.rows * d.cols; ++e)
        a(e / d.cols, e % d.cols) = get_complex(r[e], rp + "[" + std::to_string(e) + "]");
    }
    d.residues.push_back(a);
  }
  try {
    d.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("datum: ") + e.what());
  }
  return d;
}

std::vector<cd> parse_z_grid(const json& z) {
  std::vector<cd> out;
  if (z.is_array()) {
    for (std::size_t i = 0; i < z.size(); ++i) out.push_back(get_complex(z[i], "explicit.z_grid[" + std::to_string(i) + "]"));
    return out;
  }
  check_keys(z, "explicit.z_grid", {"x_min", "x_max", "x_step", "im"});
  const double x0 = get<double>(z, "x_min", "explicit.z_grid", -4.0);
  const double x1 = get<double>(z, "x_max", "explicit.z_grid", 4.0);
  const double dx = get<double>(z, "x_step", "explicit.z_grid", 0.5);
  const auto ims = get<std::vector<double>>(z, "im", "explicit.z_grid", {1.0});
  if (!(dx > 0.0) || x1 < x0) throw ConfigError("explicit.z_grid: need x_step > 0 and x_max >= x_min");
  const long n = std::lround(std::floor((x1 - x0) / dx + 1e-9));
  for (double y : ims)
    for (long i = 0; i <= n; ++i) out.emplace_back(x0 + i * dx, y);
  return out;
}

json complex_list(const std::vector<cd>& v) {
  json a = json::array();
  for (const cd& c : v) a.push_back({c.real(), c.imag()});
  return a;
}

}  // namespace

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string RunConfig::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

RunConfig parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("syntax error at " + line_of(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
  }
  check_keys(j, "", {"grid", "time", "datum", "explicit", "tolerances"});
  RunConfig c;
  dynamics::SimConfig& s = c.sim;

  const json grid = j.value("grid", json::object());
  check_keys(grid, "grid", {"xi_max", "points", "quadrature_order"});
  s.xi_max = get<double>(grid, "xi_max", "grid", s.xi_max);
  s.points = get<int>(grid, "points", "grid", s.points);
  s.end_order = get<int>(grid, "quadrature_order", "grid", s.end_order);

  const json time = j.value("time", json::object());
  check_keys(time, "time", {"dt", "t_final", "snapshot_stride"});
  s.dt = get<double>(time, "dt", "time", s.dt);
  s.t_final = get<double>(time, "t_final", "time", s.t_final);
  s.snapshot_stride = get<int>(time, "snapshot_stride", "time", s.snapshot_stride);

  if (!j.contains("datum")) throw ConfigError("missing key 'datum'");
  c.datum = parse_datum(j["datum"]);

  const json ex = j.value("explicit", json::object());
  check_keys(ex, "explicit", {"t_list", "z_grid", "side"});
  c.t_list = get<std::vector<double>>(ex, "t_list", "explicit", {s.t_final});
  if (ex.contains("z_grid")) c.z_grid = parse_z_grid(ex["z_grid"]);
  else c.z_grid = parse_z_grid(json::object());
  const std::string side = get<std::string>(ex, "side", "explicit", "both");
  if (side == "both") c.sides = {spectral::Side::rl, spectral::Side::lr};
  else if (side == "rl") c.sides = {spectral::Side::rl};
  else if (side == "lr") c.sides = {spectral::Side::lr};
  else throw ConfigError("explicit.side: expected rl, lr or both");

  const json tol = j.value("tolerances", json::object());
  check_keys(tol, "tolerances", {"explicit_rel", "side_gap", "eigen_drift", "mass_drift", "eigen_floor", "im_z_floor"});
  Tolerances& t = c.tol;
  t.explicit_rel = get<double>(tol, "explicit_rel", "tolerances", t.explicit_rel);
  t.side_gap = get<double>(tol, "side_gap", "tolerances", t.side_gap);
  t.eigen_drift = get<double>(tol, "eigen_drift", "tolerances", t.eigen_drift);
  t.mass_drift = get<double>(tol, "mass_drift", "tolerances", t.mass_drift);
  t.eigen_floor = get<double>(tol, "eigen_floor", "tolerances", t.eigen_floor);
  t.im_z_floor = get<double>(tol, "im_z_floor", "tolerances", t.im_z_floor);

  // Explicit times must be snapshots of the direct run.
  for (double tt : c.t_list) {
    if (tt < 0.0) throw ConfigError("explicit.t_list: negative time");
    s.t_final = std::max(s.t_final, tt);
  }
  s.extra_times = c.t_list;
  try {
    s.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  json canon;
  canon["grid"] = {{"xi_max", s.xi_max}, {"points", s.points}, {"quadrature_order", s.end_order}};
  canon["time"] = {{"dt", s.dt}, {"t_final", s.t_final}, {"snapshot_stride", s.snapshot_stride}};
  canon["datum"] = json::parse(hardy::rational_to_json(c.datum));
  std::string sides;
  for (auto sd : c.sides) sides += (sides.empty() ? "" : ",") + spectral::side_name(sd);
  canon["explicit"] = {{"t_list", c.t_list}, {"z_grid", complex_list(c.z_grid)}, {"side", sides}};
  canon["tolerances"] = {{"explicit_rel", t.explicit_rel}, {"side_gap", t.side_gap},
                         {"eigen_drift", t.eigen_drift},   {"mass_drift", t.mass_drift},
                         {"eigen_floor", t.eigen_floor},   {"im_z_floor", t.im_z_floor}};
  c.canonical = canon.dump();
  c.hash = fnv1a(c.canonical);
  return c;
}

RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace szego::config
