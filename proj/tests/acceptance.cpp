// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed here.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "support.hpp"
#include "szego/dynamics.hpp"
#include "szego/explicit.hpp"
#include "szego/spectral.hpp"

using namespace szego;
using explicit_formula::ExplicitEvaluator;
using hardy::HardyField;
using operators::FlatOperator;
using spectral::Side;

namespace {

constexpr double kExplicitRel = 1e-4;
constexpr double kSideGap = 1e-8;
constexpr double kEigenDrift = 1e-6;
constexpr double kEigenFloor = 1e-8;
constexpr double kMassDrift = 1e-8;
constexpr double kRatioLo = 3.5, kRatioHi = 4.5;
constexpr double kMachine = 1e-12;
constexpr double kResolvent = 1e-6;
constexpr double kLQuadrature = 1e-8;
constexpr double kTopEigen = 1e-6;
constexpr double kUnitarity = 1e-6;
constexpr double kIntertwining = 1e-5;
constexpr double kWU0 = 1e-5;
constexpr double kOrderLo = 12.0, kOrderHi = 20.0;
constexpr double kRuntime = 120.0;

const std::vector<double> kTimes{0.5, 1.0, 2.0};
const double kLaxT = 1.0, kLaxH1 = 1e-2, kLaxH2 = 5e-3;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<cd> z_grid() {
  std::vector<cd> z;
  for (double y : {0.5, 1.0})
    for (int i = 0; i <= 16; ++i) z.emplace_back(-4.0 + 0.5 * i, y);
  return z;
}

dynamics::SimConfig run_config() {
  dynamics::SimConfig c;  // xi_max 32, K 512, dt 1e-3
  c.t_final = 2.0;
  c.snapshot_stride = 100;
  c.extra_times = {0.5, 1.0, 2.0};
  for (double h : {kLaxH1, kLaxH2}) {
    c.extra_times.push_back(kLaxT - h);
    c.extra_times.push_back(kLaxT + h);
  }
  return c;
}

struct Run {
  HardyField u0;
  dynamics::Trajectory traj;
  double seconds = 0.0;
};

Run make_run(const hardy::RationalDatum& d) {
  const auto t0 = std::chrono::steady_clock::now();
  Run r;
  const dynamics::SimConfig c = run_config();
  r.u0 = hardy::rational_to_field(d, c.grid());
  r.traj = dynamics::integrate(r.u0.base(), c);
  r.seconds = seconds_since(t0);
  return r;
}

Outcome explicit_check(const Run& run, bool check_sides) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = explicit_formula::compare_explicit_direct(run.u0, run.traj, kTimes, z_grid(), {Side::rl, Side::lr});
  const double secs = run.seconds + seconds_since(t0);
  bool pass = rep.max_rel_err <= kExplicitRel && secs <= kRuntime;
  std::string s = "max rel gap " + fmt("%.3e", rep.max_rel_err) + " (tol " + fmt("%.0e", kExplicitRel) + ")";
  if (check_sides) {
    pass = pass && rep.max_side_gap <= kSideGap;
    s += ", rl/lr gap " + fmt("%.3e", rep.max_side_gap) + " (tol " + fmt("%.0e", kSideGap) + ")";
  }
  s += ", " + std::to_string(rep.rows.size()) + " evaluations, " + fmt("%.1f", secs) + " s";
  return {pass, s};
}

Outcome isospectral(const std::vector<const Run*>& runs) {
  double eig = 0.0, mass = 0.0;
  for (const Run* r : runs)
    for (Side s : {Side::rl, Side::lr}) {
      const auto c = spectral::conserved_report(r->traj, s, kEigenFloor);
      eig = std::max(eig, c.eigen_drift);
      mass = std::max(mass, c.mass_drift);
    }
  return {eig <= kEigenDrift && mass <= kMassDrift,
          "eigenvalue drift " + fmt("%.3e", eig) + " (tol " + fmt("%.0e", kEigenDrift) + "), mass drift " +
              fmt("%.3e", mass) + " (tol " + fmt("%.0e", kMassDrift) + ")"};
}

Outcome lax(const std::vector<const Run*>& runs) {
  double lo = 1e300, hi = 0.0;
  std::string s;
  for (const Run* r : runs)
    for (Side side : {Side::rl, Side::lr}) {
      const double a = spectral::lax_residual(r->traj, kLaxT, kLaxH1, side);
      const double b = spectral::lax_residual(r->traj, kLaxT, kLaxH2, side);
      lo = std::min(lo, a / b);
      hi = std::max(hi, a / b);
      s += (s.empty() ? "" : ", ") + spectral::side_name(side) + " " + fmt("%.2e", a) + "->" + fmt("%.2e", b);
    }
  return {lo >= kRatioLo && hi <= kRatioHi,
          "ratios in [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "] (need [3.5, 4.5]); " + s};
}

double rel_max(const Mat& a, const Mat& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return scale > 0.0 ? (a - b).cwiseAbs().maxCoeff() / scale : 0.0;
}

hardy::RationalDatum smooth_probe() {
  hardy::RationalDatum d;
  d.poles = {cd(0.5, -1.5)};
  d.residues = {Mat::Constant(1, 1, cd(1.0, 0.5))};
  return d;
}

Outcome operator_identities() {
  const FreqGrid g(32.0, 96, 6);
  const int d = 4;  // distinct from both field dimensions
  double adj = 0.0, tr = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto dat = testing::random_datum(seed, 2, 3, 2);
    const HardyField u = hardy::rational_to_field(dat, g);
    const HardyField ut = hardy::transpose_field(u);
    const int m = u.rows(), n = u.cols();
    const FlatOperator hr = operators::hankel_right(u), hl = operators::hankel_left(u);
    for (int trial = 0; trial < 3; ++trial) {
      const HardyField f = testing::random_field(g, d, n, 100 * seed + trial);
      const HardyField gg = testing::random_field(g, m, d, 200 * seed + trial);
      const cd a = hardy::inner(hr.apply(f), gg), b = hardy::inner(hl.apply(gg), f);
      adj = std::max(adj, std::abs(a - b) / std::max(std::abs(a), 1e-300));
    }
    // T op T, with in_r x in_c the shape of the original input and
    // out_r x out_c the shape of op's output.
    auto conj_t = [&](const FlatOperator& op, int out_r, int out_c, int in_r, int in_c) {
      return Mat(operators::transpose_permutation(g, out_r, out_c) * op.full(d) *
                 operators::transpose_permutation(g, in_r, in_c));
    };
    // H^l_U = T H^r_{U^T} T: H^r_{U^T} takes d x M fields to N x d fields.
    tr = std::max(tr, rel_max(hl.full(d), conj_t(operators::hankel_right(ut), n, d, m, d)));
    tr = std::max(tr, rel_max(hr.full(d), conj_t(operators::hankel_left(ut), d, m, d, n)));
    const hardy::SymbolField v = operators::symbol_product(u, u);
    const hardy::SymbolField vt = hardy::transpose_symbol(v);
    tr = std::max(tr, rel_max(operators::toeplitz_left(v).full(d),
                              conj_t(operators::toeplitz_right(vt), m, d, d, m)));
    tr = std::max(tr, rel_max(operators::double_hankel_rl(u).full(d),
                              conj_t(operators::double_hankel_lr(ut), d, m, m, d)));
    tr = std::max(tr, rel_max(operators::double_hankel_lr(u).full(d),
                              conj_t(operators::double_hankel_rl(ut), n, d, d, n)));
    tr = std::max(tr, rel_max(spectral::L_operator(u, 1.0, Side::rl).full(d),
                              conj_t(spectral::L_operator(ut, 1.0, Side::lr), d, m, m, d)));
  }

  std::vector<double> right, left, smooth;
  for (int k : {128, 256, 512}) {
    const FreqGrid gk(32.0, k, 0);
    const HardyField u = hardy::rational_to_field(testing::scalar_benchmark(), gk);
    const FlatOperator dr = operators::hankel_toeplitz_identity_defect(u, u);
    const FlatOperator dl = operators::hankel_toeplitz_identity_defect_left(u, u);
    right.push_back(operators::weighted_operator_norm(dr));
    left.push_back(operators::weighted_operator_norm(dl));
    // Informational: the same defects acting on a fixed smooth field.
    const HardyField f = hardy::rational_to_field(smooth_probe(), gk).base();
    const double fn = std::sqrt(hardy::norm2(f));
    smooth.push_back(std::max(std::sqrt(hardy::norm2(dr.apply(f))), std::sqrt(hardy::norm2(dl.apply(f)))) / fn);
  }
  double lo = 1e300, hi = 0.0;
  for (const auto* r : {&right, &left})
    for (int i = 0; i + 1 < 3; ++i) {
      lo = std::min(lo, (*r)[i] / (*r)[i + 1]);
      hi = std::max(hi, (*r)[i] / (*r)[i + 1]);
    }
  const bool pass = adj <= kMachine && tr <= kMachine && lo >= kRatioLo && hi <= kRatioHi;
  return {pass, "adjoint symmetry " + fmt("%.2e", adj) + ", transpose conjugations " + fmt("%.2e", tr) +
                    " (tol 1e-12); identity residual ratios K 128->256->512 in [" + fmt("%.3f", lo) + ", " +
                    fmt("%.3f", hi) + "] (residuals " + fmt("%.2e", right[0]) + ", " + fmt("%.2e", right[1]) +
                    ", " + fmt("%.2e", right[2]) + "); on a smooth field " + fmt("%.2e", smooth[0]) + ", " +
                    fmt("%.2e", smooth[1]) + ", " + fmt("%.2e", smooth[2]) + " (ratios " +
                    fmt("%.3f", smooth[0] / smooth[1]) + ", " + fmt("%.3f", smooth[1] / smooth[2]) + ")"};
}

Outcome resolvent_consistency() {
  const FreqGrid g(32.0, 512, 6);
  std::vector<cd> zs;
  for (double y : {0.5, 1.0, 2.0})
    for (double x : {-2.0, -0.5, 0.5, 2.0}) zs.emplace_back(x, y);
  double worst = 0.0, exact = 0.0;
  for (std::uint64_t seed = 11; seed <= 20; ++seed) {
    const auto dat = testing::random_datum(seed, 2, 2, 3);
    const HardyField f = hardy::rational_to_field(dat, g).base();
    for (const cd& z : zs) {
      const HardyField r = operators::resolvent_G(g, z).apply(f);
      const Mat via = operators::icalI(r).value / cd(0.0, kTwoPi);
      worst = std::max(worst, (via - hardy::poisson_eval(f, z)).cwiseAbs().maxCoeff());
      exact = std::max(exact, (via - hardy::rational_value(dat, z)).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= kResolvent, "max |I(R_z F)/2 pi i - poisson| " + fmt("%.2e", worst) + " (tol 1e-06) over 10 fields x " +
                                   std::to_string(zs.size()) + " points; vs closed form " + fmt("%.2e", exact)};
}

Outcome l_quadrature(const Run& run) {
  double worst = 0.0;
  for (Side s : {Side::rl, Side::lr}) {
    const auto dec = spectral::decompose(spectral::double_hankel(run.u0, s));
    const auto m = spectral::m_factors(run.u0, s);
    const auto f = spectral::L_factors(dec, m, 1.0);
    const FlatOperator closed(f.y * f.z.adjoint(), operators::Linearity::linear, dec.grid, dec.slices, dec.len,
                              dec.slices, dec.len);
    const FlatOperator quad = spectral::L_quadrature(dec, m, 1.0, 1024);
    worst = std::max(worst, operators::weighted_norm(closed - quad) / operators::weighted_norm(quad));
  }
  return {worst <= kLQuadrature, "relative gap " + fmt("%.2e", worst) + " (tol 1e-08, 1024 midpoint nodes)"};
}

Outcome top_eigen(const Run& run) {
  double worst = 0.0;
  for (Side s : {Side::rl, Side::lr}) {
    const auto dec = spectral::decompose(spectral::double_hankel(run.u0, s));
    worst = std::max(worst, std::abs(dec.values.maxCoeff() - 0.25));
  }
  return {worst <= kTopEigen, "|top eigenvalue - 1/4| " + fmt("%.2e", worst) + " (tol 1e-06)"};
}

Outcome w_mechanism(const Run& run) {
  const auto dec = spectral::decompose(spectral::double_hankel(run.u0, Side::lr));
  const double top = dec.values.maxCoeff();
  std::vector<int> keep;
  for (int a = 0; a < dec.values.size(); ++a)
    if (dec.values[a] > 1e-12 * top) keep.push_back(a);
  const int p = static_cast<int>(keep.size()), n = run.u0.cols(), m = run.u0.rows();
  const Mat vecs = dec.vectors();
  Mat slices(vecs.rows(), p + m);
  for (int i = 0; i < p; ++i) slices.col(i) = vecs.col(keep[i]);
  slices.rightCols(m) = operators::slice_matrix(run.u0.base(), operators::Slices::rows);
  const HardyField probes = operators::field_from_slices(slices, run.u0.grid(), operators::Slices::rows, n);

  dynamics::SimConfig c = run_config();
  c.extra_times.clear();
  const auto w = dynamics::propagate_W(run.u0, probes, c);
  const Eigen::VectorXd d2 = operators::half_weights(run.u0.grid(), n).array().square();
  double inter = 0.0, wu = 0.0;
  for (std::size_t s = 0; s < w.times.size(); ++s) {
    const Mat x = operators::slice_matrix(w.wx[s], operators::Slices::rows);
    Mat b = Mat::Zero(x.rows(), x.rows());
    for (int i = 0; i < p; ++i) b += dec.values[keep[i]] * x.col(i) * (d2.asDiagonal() * x.col(i)).adjoint();
    const FlatOperator lam = spectral::double_hankel(w.u[s].with_tail(), Side::lr);
    const FlatOperator rebuilt(b, operators::Linearity::linear, lam.grid(), lam.in_slices(), n, lam.out_slices(), n);
    inter = std::max(inter, operators::weighted_norm(lam - rebuilt));
    const HardyField wu0 = operators::field_from_slices(x.rightCols(m), run.u0.grid(), operators::Slices::rows, n);
    wu = std::max(wu, std::sqrt(hardy::norm2(wu0 - w.u[s])));
  }
  return {w.max_gram_drift <= kUnitarity && inter <= kIntertwining && wu <= kWU0,
          "unitarity drift " + fmt("%.2e", w.max_gram_drift) + " (tol 1e-06, " + std::to_string(w.corrections) +
              " corrections), intertwining " + fmt("%.2e", inter) + " (tol 1e-05), |W U0 - U(t)| " + fmt("%.2e", wu) +
              " (tol 1e-05), " + std::to_string(p) + " eigenprobes"};
}

Outcome self_convergence() {
  std::vector<HardyField> ends;
  for (double dt : {0.05, 0.025, 0.0125}) {
    dynamics::SimConfig c;
    c.dt = dt;
    c.t_final = 1.0;
    c.snapshot_stride = 1000;
    const HardyField u0 = hardy::rational_to_field(testing::matrix_benchmark(), c.grid());
    ends.push_back(dynamics::integrate(u0.base(), c).snapshots.back().u);
  }
  const double e1 = std::sqrt(hardy::norm2(ends[0] - ends[1]));
  const double e2 = std::sqrt(hardy::norm2(ends[1] - ends[2]));
  const double r = e1 / e2;
  return {r >= kOrderLo && r <= kOrderHi, "dt 0.05/0.025/0.0125 to t = 1: differences " + fmt("%.3e", e1) + ", " +
                                              fmt("%.3e", e2) + ", ratio " + fmt("%.2f", r) + " (need [12, 20])"};
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  int failed = 0;
  auto report = [&](const char* id, const char* name, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %s %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  };

  const Run scalar = make_run(testing::scalar_benchmark());
  const Run matrix = make_run(testing::matrix_benchmark());

  report("C1", "explicit formula vs direct integration, scalar", [&] { return explicit_check(scalar, false); });
  report("C2", "explicit formula vs direct integration, 2x2", [&] { return explicit_check(matrix, true); });
  report("C3", "isospectrality and mass", [&] { return isospectral({&scalar, &matrix}); });
  report("C4", "Heisenberg-Lax residual contraction", [&] { return lax({&scalar, &matrix}); });
  report("C5", "operator identity suite", operator_identities);
  report("C6", "resolvent and Poisson consistency", resolvent_consistency);
  report("C7", "closed-form L(t) vs tau quadrature", [&] { return l_quadrature(scalar); });
  report("C8", "rank-one spectral oracle", [&] { return top_eigen(scalar); });
  report("C9", "W(t) unitarity, intertwining, W U0 = U(t)", [&] { return w_mechanism(scalar); });
  report("C10", "RK4 self-convergence", self_convergence);
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
