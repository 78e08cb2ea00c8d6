// Batch front-end: simulate, explicit, compare, spectrum, selftest.
//
// Exit codes: 0 ok, 2 configuration (including grid mismatches), 3 numerical
// failure or failed check, 4 refused because Im z is below the floor.
#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "szego/config.hpp"
#include "szego/dynamics.hpp"
#include "szego/explicit.hpp"
#include "szego/selftest.hpp"
#include "szego/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace szego;
using hardy::HardyField;
using spectral::Side;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kGuard = 4 };

struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config, out = "out", direct;
  int threads = 1;
  bool allow_low_im_z = false;
};

// Runs body(i) for i in [0, n) on up to `threads` workers. Results go into
// caller-owned slots, so output order never depends on scheduling. The first
// exception is rethrown after all workers stop.
template <class F>
void parallel_for(int n, int threads, F body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int i; (i = next++) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

json provenance(const config::RunConfig& c) {
  return {{"config_hash", c.hash_hex()},
          {"grid", {{"xi_max", c.sim.xi_max}, {"points", c.sim.points}, {"quadrature_order", c.sim.end_order}}},
          {"shape", {c.datum.rows, c.datum.cols}}};
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << s;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_z_floor(const config::RunConfig& c, bool allow) {
  for (const cd& z : c.z_grid) {
    if (!(z.imag() > 0.0)) throw config::ConfigError("explicit.z_grid: Im z must be positive");
    if (!allow && z.imag() < c.tol.im_z_floor)
      throw GuardError("Im z = " + num(z.imag()) + " is below the floor " + num(c.tol.im_z_floor) +
                       " (pass --allow-low-im-z to evaluate anyway)");
  }
}

// ---- trajectories on disk ----

std::string snapshot_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "u_%05zu.csv", i);
  return buf;
}

void save_trajectory(const fs::path& dir, const config::RunConfig& c, const dynamics::Trajectory& tr) {
  fs::create_directories(dir / "snapshots");
  json snaps = json::array();
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
    std::ostringstream os;
    hardy::write_field_csv(os, tr.snapshots[i].u);
    write_text(dir / "snapshots" / snapshot_name(i), os.str());
    snaps.push_back({{"t", tr.snapshots[i].t}, {"file", "snapshots/" + snapshot_name(i)}, {"mass", tr.mass[i]}});
  }
  json m = provenance(c);
  m["dt"] = c.sim.dt;
  m["t_final"] = c.sim.t_final;
  m["snapshots"] = snaps;
  m["config"] = json::parse(c.canonical);
  write_json(dir / "manifest.json", m);
}

HardyField read_field_csv(const fs::path& p, const FreqGrid& g, int rows, int cols) {
  std::ifstream f(p);
  if (!f) throw config::ConfigError("cannot read snapshot " + p.string());
  std::string line;
  std::getline(f, line);
  HardyField u(g, rows, cols);
  int count = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    double xi, re, im;
    int i, j;
    if (std::sscanf(line.c_str(), "%lf,%d,%d,%lf,%lf", &xi, &i, &j, &re, &im) != 5)
      throw config::ConfigError("malformed snapshot line in " + p.string());
    const int k = static_cast<int>(std::lround(xi / g.spacing()));
    if (k < 0 || k >= g.points() || i < 0 || i >= rows || j < 0 || j >= cols)
      throw config::ConfigError("snapshot entry out of range in " + p.string());
    u.data()(k, i * cols + j) = cd(re, im);
    ++count;
  }
  if (count != g.points() * rows * cols) throw config::ConfigError("incomplete snapshot " + p.string());
  return u;
}

// Loads a run written by `simulate`; its grid and shape must match `c`.
dynamics::Trajectory load_trajectory(const fs::path& dir, const config::RunConfig& c) {
  std::ifstream f(dir / "manifest.json");
  if (!f) throw config::ConfigError("no manifest.json in " + dir.string());
  json m;
  try {
    m = json::parse(f);
  } catch (const json::exception& e) {
    throw config::ConfigError(std::string("manifest.json: ") + e.what());
  }
  const auto& g = m.at("grid");
  const FreqGrid stored(g.at("xi_max").get<double>(), g.at("points").get<int>(), g.at("quadrature_order").get<int>());
  require_same_grid(c.sim.grid(), stored, "direct run");
  if (m.at("shape") != json{c.datum.rows, c.datum.cols}) throw ShapeError("direct run: field shape mismatch");
  dynamics::Trajectory tr;
  tr.config = c.sim;
  for (const auto& s : m.at("snapshots")) {
    tr.snapshots.push_back(
        {s.at("t").get<double>(), read_field_csv(dir / s.at("file").get<std::string>(), stored, c.datum.rows,
                                                 c.datum.cols)});
    tr.mass.push_back(hardy::norm2(tr.snapshots.back().u));
  }
  return tr;
}

dynamics::Trajectory direct_run(const Options& o, const config::RunConfig& c) {
  if (!o.direct.empty()) return load_trajectory(o.direct, c);
  return dynamics::integrate(hardy::rational_to_field(c.datum, c.sim.grid()), c.sim);
}

// ---- subcommands ----

struct Conserved {
  spectral::ConservedSeries rl, lr;
};

Conserved conserved(const config::RunConfig& c, const dynamics::Trajectory& tr) {
  return {spectral::conserved_report(tr, Side::rl, c.tol.eigen_floor),
          spectral::conserved_report(tr, Side::lr, c.tol.eigen_floor)};
}

json conserved_json(const config::RunConfig& c, const Conserved& cs, bool& ok) {
  json j = provenance(c);
  j["t"] = cs.rl.t;
  j["mass"] = cs.rl.mass;
  j["mass_drift"] = cs.rl.mass_drift;
  j["sides"] = json::object();
  ok = cs.rl.mass_drift <= c.tol.mass_drift;
  for (const auto* r : {&cs.rl, &cs.lr}) {
    j["sides"][r == &cs.rl ? "rl" : "lr"] = {
        {"eigen_drift", r->eigen_drift}, {"trace_drift", r->trace_drift}, {"trace_sq_drift", r->trace_sq_drift}};
    ok = ok && r->eigen_drift <= c.tol.eigen_drift;
  }
  j["tolerances"] = {{"eigen_drift", c.tol.eigen_drift}, {"mass_drift", c.tol.mass_drift}};
  j["pass"] = ok;
  return j;
}

void warn_tail(const config::RunConfig& c) {
  const double f = hardy::tail_fraction(hardy::rational_to_field(c.datum, c.sim.grid()).base());
  if (f > 1e-8)
    std::cerr << "warning: datum carries " << f << " of its norm beyond 0.9 xi_max; enlarge grid.xi_max\n";
}

// Long-form (t, name, value) table of the conserved quantities.
std::string conserved_csv(const Conserved& cs) {
  std::ostringstream os;
  os << "t,name,value\n";
  for (std::size_t i = 0; i < cs.rl.t.size(); ++i) {
    const std::string t = num(cs.rl.t[i]);
    os << t << ",mass," << num(cs.rl.mass[i]) << '\n';
    for (const auto* r : {&cs.rl, &cs.lr}) {
      const char* tag = r == &cs.rl ? "rl" : "lr";
      os << t << ",trace_" << tag << ',' << num(r->trace[i]) << '\n';
      os << t << ",trace_sq_" << tag << ',' << num(r->trace_sq[i]) << '\n';
    }
  }
  return os.str();
}

int cmd_simulate(const Options& o, const config::RunConfig& c) {
  warn_tail(c);
  const HardyField u0 = hardy::rational_to_field(c.datum, c.sim.grid());
  const dynamics::Trajectory tr = dynamics::integrate(u0, c.sim);
  const fs::path out(o.out);
  save_trajectory(out, c, tr);
  const Conserved cs = conserved(c, tr);
  bool ok = true;
  write_json(out / "conserved.json", conserved_json(c, cs, ok));
  write_text(out / "conserved.csv", conserved_csv(cs));
  std::cerr << "simulate: " << tr.snapshots.size() << " snapshots in " << tr.wall_seconds << " s -> " << out << "\n";
  if (!ok) throw CheckFailed("conserved quantities drifted beyond tolerance (see conserved.json)");
  return kOk;
}

struct ExplicitRow {
  double t;
  cd z;
  Side side;
  Mat value;
  double abs_err = -1.0, rel_err = -1.0, side_gap = -1.0;  // negative: not available
};

// Evaluates the explicit formula over t_list x z_grid x sides; `direct`, when
// given, fills the error columns.
std::vector<ExplicitRow> explicit_rows(const Options& o, const config::RunConfig& c,
                                       const dynamics::Trajectory* direct) {
  const HardyField u0 = hardy::rational_to_field(c.datum, c.sim.grid());
  std::vector<explicit_formula::ExplicitEvaluator> evals;
  for (Side s : c.sides) {
    evals.emplace_back(u0, s);
    evals.back().prepare_times(c.t_list);
  }
  const int nt = static_cast<int>(c.t_list.size()), nz = static_cast<int>(c.z_grid.size());
  const int ns = static_cast<int>(evals.size());
  std::vector<ExplicitRow> rows(static_cast<std::size_t>(nt) * nz * ns);
  std::vector<const dynamics::Snapshot*> snaps(nt, nullptr);
  if (direct)
    for (int a = 0; a < nt; ++a) {
      snaps[a] = direct->at(c.t_list[a]);
      if (!snaps[a]) throw config::ConfigError("direct run has no snapshot at t = " + num(c.t_list[a]));
    }
  parallel_for(nt * nz, o.threads, [&](int i) {
    const int a = i / nz, b = i % nz;
    const double t = c.t_list[a];
    const cd z = c.z_grid[b];
    Mat ref;
    if (direct) ref = hardy::poisson_eval(snaps[a]->u, z);
    for (int s = 0; s < ns; ++s) {
      ExplicitRow& r = rows[static_cast<std::size_t>(i) * ns + s];
      r.t = t;
      r.z = z;
      r.side = evals[s].side();
      r.value = evals[s].evaluate_prepared(t, z);
      if (direct) {
        r.abs_err = (r.value - ref).cwiseAbs().maxCoeff();
        r.rel_err = explicit_formula::relative_gap(r.value, ref);
      }
    }
    if (ns == 2) {
      const double gap = explicit_formula::relative_gap(rows[i * ns + 1].value, rows[i * ns].value);
      rows[i * ns].side_gap = rows[i * ns + 1].side_gap = gap;
    }
  });
  return rows;
}

json opt_num(double v) { return v < 0.0 ? json(nullptr) : json(v); }

void write_explicit(const fs::path& dir, const std::string& stem, const config::RunConfig& c,
                    const std::vector<ExplicitRow>& rows, json summary) {
  json list = json::array();
  std::ostringstream csv;
  csv << "t,z_re,z_im,side,row,col,value_re,value_im,abs_err,rel_err,side_gap\n";
  for (const auto& r : rows) {
    json re = json::array(), im = json::array();
    for (int i = 0; i < r.value.rows(); ++i)
      for (int j = 0; j < r.value.cols(); ++j) {
        re.push_back(r.value(i, j).real());
        im.push_back(r.value(i, j).imag());
        csv << num(r.t) << ',' << num(r.z.real()) << ',' << num(r.z.imag()) << ',' << spectral::side_name(r.side)
            << ',' << i << ',' << j << ',' << num(r.value(i, j).real()) << ',' << num(r.value(i, j).imag()) << ','
            << (r.abs_err < 0 ? "" : num(r.abs_err)) << ',' << (r.rel_err < 0 ? "" : num(r.rel_err)) << ','
            << (r.side_gap < 0 ? "" : num(r.side_gap)) << '\n';
      }
    list.push_back({{"t", r.t},
                    {"z_re", r.z.real()},
                    {"z_im", r.z.imag()},
                    {"side", spectral::side_name(r.side)},
                    {"value_re", re},
                    {"value_im", im},
                    {"abs_err", opt_num(r.abs_err)},
                    {"rel_err", opt_num(r.rel_err)},
                    {"side_gap", opt_num(r.side_gap)}});
  }
  json j = provenance(c);
  j["summary"] = std::move(summary);
  j["rows"] = std::move(list);
  fs::create_directories(dir);
  write_json(dir / (stem + ".json"), j);
  write_text(dir / (stem + ".csv"), csv.str());
}

json summarize(const config::RunConfig& c, const std::vector<ExplicitRow>& rows, bool& ok) {
  double rel = -1.0, gap = -1.0;
  for (const auto& r : rows) {
    rel = std::max(rel, r.rel_err);
    gap = std::max(gap, r.side_gap);
  }
  ok = (rel < 0.0 || rel <= c.tol.explicit_rel) && (gap < 0.0 || gap <= c.tol.side_gap);
  return {{"max_rel_err", opt_num(rel)},
          {"max_side_gap", opt_num(gap)},
          {"tolerances", {{"explicit_rel", c.tol.explicit_rel}, {"side_gap", c.tol.side_gap}}},
          {"pass", ok}};
}

int cmd_explicit(const Options& o, const config::RunConfig& c) {
  check_z_floor(c, o.allow_low_im_z);
  warn_tail(c);
  dynamics::Trajectory direct;
  if (!o.direct.empty()) direct = load_trajectory(o.direct, c);
  const auto rows = explicit_rows(o, c, o.direct.empty() ? nullptr : &direct);
  bool ok = true;
  write_explicit(o.out, "explicit", c, rows, summarize(c, rows, ok));
  std::cerr << "explicit: " << rows.size() << " evaluations -> " << fs::path(o.out) / "explicit.json" << "\n";
  if (!ok) throw CheckFailed("explicit formula disagrees beyond tolerance (see explicit.json)");
  return kOk;
}

int cmd_compare(const Options& o, const config::RunConfig& c) {
  check_z_floor(c, o.allow_low_im_z);
  const dynamics::Trajectory direct = direct_run(o, c);
  const auto rows = explicit_rows(o, c, &direct);
  bool ok = true;
  json s = summarize(c, rows, ok);
  write_explicit(o.out, "compare", c, rows, s);
  std::cerr << "compare: max rel err " << s["max_rel_err"] << ", rl/lr gap " << s["max_side_gap"] << "\n";
  if (!ok) throw CheckFailed("explicit formula vs direct run beyond tolerance (see compare.json)");
  return kOk;
}

int cmd_spectrum(const Options& o, const config::RunConfig& c) {
  const dynamics::Trajectory tr = direct_run(o, c);
  const int n = static_cast<int>(tr.snapshots.size());
  std::vector<std::vector<double>> ev(static_cast<std::size_t>(n) * 2);
  parallel_for(n * 2, o.threads, [&](int i) {
    const Side s = i % 2 == 0 ? Side::rl : Side::lr;
    const auto a = operators::symmetrized(spectral::double_hankel(tr.snapshots[i / 2].u.with_tail(), s));
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
    std::vector<double>& v = ev[i];
    for (int k = 0; k < es.eigenvalues().size(); ++k)
      if (es.eigenvalues()[k] > c.tol.eigen_floor) v.push_back(es.eigenvalues()[k]);
    std::sort(v.rbegin(), v.rend());
  });
  std::ostringstream csv;
  csv << "t,side,index,eigenvalue\n";
  json table = json::array();
  for (int i = 0; i < n * 2; ++i) {
    const double t = tr.snapshots[i / 2].t;
    const std::string side = i % 2 == 0 ? "rl" : "lr";
    for (std::size_t k = 0; k < ev[i].size(); ++k) csv << num(t) << ',' << side << ',' << k << ',' << num(ev[i][k]) << '\n';
    table.push_back({{"t", t}, {"side", side}, {"eigenvalues", ev[i]}});
  }
  json j = provenance(c);
  j["eigen_floor"] = c.tol.eigen_floor;
  j["snapshots"] = table;
  fs::create_directories(o.out);
  write_json(fs::path(o.out) / "spectrum.json", j);
  write_text(fs::path(o.out) / "spectrum.csv", csv.str());
  return kOk;
}

int cmd_selftest(const Options& o, const config::RunConfig& c) {
  const selftest::Report r = selftest::run(c);
  json checks = json::array();
  for (const auto& k : r.checks) {
    checks.push_back({{"name", k.name}, {"pass", k.pass}, {"value", k.value}, {"threshold", k.threshold},
                      {"detail", k.detail}});
    std::cout << (k.pass ? "PASS " : "FAIL ") << k.name << ": " << k.detail << " = " << k.value << "\n";
  }
  json j = provenance(c);
  j["checks"] = checks;
  j["pass"] = r.all_pass();
  fs::create_directories(o.out);
  write_json(fs::path(o.out) / "selftest.json", j);
  if (!r.all_pass()) throw CheckFailed("failed checks: " + r.failures());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cubic matrix Szego equation: direct simulation and explicit formula"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub, bool direct) {
    sub->add_option("--config", o.config, "JSON configuration file")->required();
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_flag("--allow-low-im-z", o.allow_low_im_z, "evaluate below the Im z floor");
    if (direct) sub->add_option("--direct", o.direct, "directory written by `simulate` to use as the direct run");
  };
  using Cmd = int (*)(const Options&, const config::RunConfig&);
  const std::vector<std::tuple<const char*, const char*, Cmd, bool>> cmds{
      {"simulate", "integrate the flow and write snapshots, manifest and conserved report", cmd_simulate, false},
      {"explicit", "evaluate the explicit formula over the (t, z) grid", cmd_explicit, true},
      {"compare", "cross-validate the explicit formula against the direct run", cmd_compare, true},
      {"spectrum", "eigenvalues of the double Hankel operators per snapshot", cmd_spectrum, true},
      {"selftest", "operator-identity suite on the configured datum", cmd_selftest, false}};
  std::vector<std::pair<CLI::App*, Cmd>> subs;
  for (const auto& [name, help, fn, direct] : cmds) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, direct);
    subs.emplace_back(s, fn);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }
  try {
    const config::RunConfig c = config::load(o.config);
    for (const auto& [s, fn] : subs)
      if (s->parsed()) return fn(o, c);
  } catch (const config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ShapeError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const GuardError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kGuard;
  } catch (const CheckFailed& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kNumerical;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}
