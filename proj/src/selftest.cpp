#include "szego/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "szego/spectral.hpp"

namespace szego::selftest {

using hardy::HardyField;
using operators::FlatOperator;
using spectral::Side;

namespace {

constexpr double kMachine = 1e-12;
constexpr double kRatioLo = 3.5, kRatioHi = 4.5;
constexpr double kResolvent = 1e-6;
constexpr double kLQuadrature = 1e-8;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

HardyField noise(const FreqGrid& g, int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  HardyField f(g, rows, cols);
  for (int k = 0; k < f.nodes(); ++k)
    for (int e = 0; e < rows * cols; ++e) f.data()(k, e) = cd(n(rng), n(rng));
  return f;
}

double rel_max(const Mat& a, const Mat& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return scale > 0.0 ? (a - b).cwiseAbs().maxCoeff() / scale : 0.0;
}

Check adjoint_symmetry(const HardyField& u) {
  const int m = u.rows(), n = u.cols(), d = 3;
  const FlatOperator hr = operators::hankel_right(u), hl = operators::hankel_left(u);
  double worst = 0.0;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const HardyField f = noise(u.grid(), d, n, 10 * s), g = noise(u.grid(), m, d, 10 * s + 1);
    const cd a = hardy::inner(hr.apply(f), g), b = hardy::inner(hl.apply(g), f);
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale > 0.0) worst = std::max(worst, std::abs(a - b) / scale);
  }
  return {"adjoint_symmetry", worst <= kMachine, worst, kMachine, "(H^r_U F, G) = (H^l_U G, F)"};
}

Check transpose_conjugations(const HardyField& u) {
  const FreqGrid& g = u.grid();
  const HardyField ut = hardy::transpose_field(u);
  const int m = u.rows(), n = u.cols(), d = std::max(m, n) + 1;
  auto conj_t = [&](const FlatOperator& op, int out_r, int out_c, int in_r, int in_c) {
    return Mat(operators::transpose_permutation(g, out_r, out_c) * op.full(d) *
               operators::transpose_permutation(g, in_r, in_c));
  };
  double tr = 0.0;
  tr = std::max(tr, rel_max(operators::hankel_left(u).full(d), conj_t(operators::hankel_right(ut), n, d, m, d)));
  tr = std::max(tr, rel_max(operators::hankel_right(u).full(d), conj_t(operators::hankel_left(ut), d, m, d, n)));
  const hardy::SymbolField v = operators::symbol_product(u, u);
  tr = std::max(tr, rel_max(operators::toeplitz_left(v).full(d),
                            conj_t(operators::toeplitz_right(hardy::transpose_symbol(v)), m, d, d, m)));
  tr = std::max(tr, rel_max(operators::double_hankel_rl(u).full(d),
                            conj_t(operators::double_hankel_lr(ut), d, m, m, d)));
  tr = std::max(tr, rel_max(operators::double_hankel_lr(u).full(d),
                            conj_t(operators::double_hankel_rl(ut), n, d, d, n)));
  return {"transpose_conjugations", tr <= kMachine, tr, kMachine, "H, T, double Hankel under U -> U^T"};
}

// The operator-norm ratio decides the check. The ratio of the defect acting
// on one smooth field is reported alongside it.
Check identity_refinement(const config::RunConfig& cfg) {
  std::vector<double> res, smooth;
  hardy::RationalDatum probe;
  probe.rows = cfg.datum.rows;
  probe.cols = cfg.datum.rows;
  probe.poles = {cd(0.5, -1.5)};
  probe.residues = {Mat::Identity(probe.rows, probe.cols) * cd(1.0, 0.5)};
  for (int k : {128, 256, 512}) {
    const FreqGrid g(cfg.sim.xi_max, k, 0);
    const HardyField u = hardy::rational_to_field(cfg.datum, g);
    const FlatOperator dr = operators::hankel_toeplitz_identity_defect(u, u);
    const FlatOperator dl = operators::hankel_toeplitz_identity_defect_left(u, u);
    res.push_back(std::max(operators::weighted_operator_norm(dr), operators::weighted_operator_norm(dl)));
    const HardyField f = hardy::rational_to_field(probe, g).base();
    smooth.push_back(std::sqrt(hardy::norm2(dr.apply(f)) / hardy::norm2(f)));
  }
  std::string detail = "operator-norm residuals " + num(res[0]) + ", " + num(res[1]) + ", " + num(res[2]);
  if (res[0] < 1e-14) return {"identity_refinement", true, 0.0, kRatioLo, detail + " (identity exact)"};
  const double r1 = res[0] / res[1], r2 = res[1] / res[2];
  const bool pass = std::min(r1, r2) >= kRatioLo && std::max(r1, r2) <= kRatioHi;
  detail += "; ratios " + num(r1) + ", " + num(r2) + " (need [3.5, 4.5]); on a smooth field " + num(smooth[0]) +
            ", " + num(smooth[1]) + ", " + num(smooth[2]);
  return {"identity_refinement", pass, std::min(r1, r2), kRatioLo, detail};
}

Check resolvent_consistency(const HardyField& u) {
  const FreqGrid& g = u.grid();
  double worst = 0.0;
  std::vector<HardyField> fields{u.base()};
  hardy::RationalDatum extra;
  extra.rows = u.rows();
  extra.cols = u.cols();
  extra.poles = {cd(0.5, -1.0), cd(-1.0, -1.5)};
  extra.residues = {Mat::Constant(u.rows(), u.cols(), cd(1.0, 0.5)), Mat::Constant(u.rows(), u.cols(), cd(-0.5, 1.0))};
  fields.push_back(hardy::rational_to_field(extra, g).base());
  for (const HardyField& f : fields)
    for (double y : {0.5, 1.0, 2.0})
      for (double x : {-2.0, 0.0, 2.0}) {
        const cd z(x, y);
        const Mat via = operators::icalI(operators::resolvent_G(g, z).apply(f)).value / cd(0.0, kTwoPi);
        worst = std::max(worst, (via - hardy::poisson_eval(f, z)).cwiseAbs().maxCoeff());
      }
  return {"resolvent_consistency", worst <= kResolvent, worst, kResolvent, "|I(R_z F)/2 pi i - poisson_eval(F, z)|"};
}

Check l_quadrature(const HardyField& u) {
  double worst = 0.0;
  for (Side s : {Side::rl, Side::lr}) {
    const auto dec = spectral::decompose(spectral::double_hankel(u, s));
    const auto m = spectral::m_factors(u, s);
    const auto f = spectral::L_factors(dec, m, 1.0);
    const FlatOperator closed(f.y * f.z.adjoint(), operators::Linearity::linear, dec.grid, dec.slices, dec.len,
                              dec.slices, dec.len);
    const FlatOperator quad = spectral::L_quadrature(dec, m, 1.0, 1024);
    const double qn = operators::weighted_norm(quad), gap = operators::weighted_norm(closed - quad);
    worst = std::max(worst, qn > 0.0 ? gap / qn : gap);
  }
  return {"l_quadrature", worst <= kLQuadrature, worst, kLQuadrature, "closed-form L(1) vs 1024-node midpoint rule"};
}

}  // namespace

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string Report::failures() const {
  std::string s;
  for (const auto& c : checks)
    if (!c.pass) s += (s.empty() ? "" : ", ") + c.name;
  return s;
}

Report run(const config::RunConfig& cfg) {
  Report r;
  const FreqGrid small(cfg.sim.xi_max, 96, cfg.sim.end_order);
  const HardyField u_small = hardy::rational_to_field(cfg.datum, small);
  r.checks.push_back(adjoint_symmetry(u_small));
  r.checks.push_back(transpose_conjugations(u_small));
  r.checks.push_back(identity_refinement(cfg));
  const HardyField u = hardy::rational_to_field(cfg.datum, cfg.sim.grid());
  r.checks.push_back(resolvent_consistency(u));
  r.checks.push_back(l_quadrature(u));
  return r;
}

}  // namespace szego::selftest
