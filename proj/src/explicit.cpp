#include "szego/explicit.hpp"

#include <chrono>

namespace szego::explicit_formula {

using operators::LowRank;
using operators::slice_matrix;

ExplicitEvaluator::ExplicitEvaluator(const HardyField& u0, Side side)
    : u0_(u0.has_tail() ? u0 : u0.with_tail()), side_(side) {
  len_ = side == Side::rl ? u0.rows() : u0.cols();
  decomp_ = spectral::decompose(spectral::double_hankel(u0_, side));
  m_ = spectral::m_factors(u0_, side);
}

const ExplicitEvaluator::TimeData& ExplicitEvaluator::prepare(double t) {
  auto it = cache_.find(t);
  if (it != cache_.end()) return it->second;
  TimeData d;
  d.v = spectral::apply_propagator(decomp_, t, slice_matrix(u0_.base(), spectral::side_slices(side_)));
  d.l = spectral::L_factors(decomp_, m_, t);
  return cache_.emplace(t, std::move(d)).first->second;
}

Mat ExplicitEvaluator::assemble(const Mat& f0) const {
  const Mat v = f0 / cd(0.0, kTwoPi);
  return side_ == Side::rl ? v : Mat(v.transpose());
}

void ExplicitEvaluator::prepare_times(const std::vector<double>& ts) {
  for (double t : ts) prepare(t);
}

Mat ExplicitEvaluator::evaluate(double t, cd z) {
  prepare(t);
  double cond = 0.0;
  Mat v = evaluate_prepared(t, z, &cond);
  max_cond_ = std::max(max_cond_, cond);
  return v;
}

Mat ExplicitEvaluator::evaluate_prepared(double t, cd z, double* condition) const {
  const auto it = cache_.find(t);
  if (it == cache_.end()) throw DomainError("explicit formula: time was not prepared");
  const TimeData& d = it->second;
  const operators::ResolventKernel r(u0_.grid(), z);
  const Mat b = r.apply(d.v, len_);
  const Mat ry = r.apply(d.l.y, len_);
  const int rank = static_cast<int>(d.l.y.cols());
  const Mat cap = Mat::Identity(rank, rank) + d.l.z.adjoint() * ry;
  if (rank > 0) {
    Eigen::JacobiSVD<Mat> svd(cap);
    const auto& s = svd.singularValues();
    const double cond = s[s.size() - 1] > 0.0 ? s[0] / s[s.size() - 1] : INFINITY;
    if (condition) *condition = cond;
    if (!(cond <= 1e12)) throw NumericalError("explicit formula: capacitance system is ill-conditioned");
  }
  Mat f0 = b.topRows(len_);
  if (rank > 0) f0 -= ry.topRows(len_) * cap.partialPivLu().solve(d.l.z.adjoint() * b);
  return assemble(f0);
}

Mat ExplicitEvaluator::evaluate_dense(double t, cd z) {
  const TimeData& d = prepare(t);
  const Mat l = spectral::L_operator_full(decomp_, m_, t).matrix();
  const Mat r = operators::ResolventKernel(u0_.grid(), z).dense(len_);
  const Mat a = Mat::Identity(l.rows(), l.cols()) + r * l;
  const Eigen::PartialPivLU<Mat> lu(a);
  if (!(lu.rcond() >= 1e-12)) throw NumericalError("explicit formula: second-kind system is ill-conditioned");
  const Mat f = lu.solve(r * d.v);
  return assemble(f.topRows(len_));
}

Mat explicit_poisson(const HardyField& u0, double t, cd z, Side side) {
  if (!(z.imag() > 0.0)) throw DomainError("explicit_poisson: Im z must be positive");
  ExplicitEvaluator e(u0, side);
  return e.evaluate(t, z);
}

std::vector<Mat> explicit_trace(const HardyField& u0, double t, double y, const std::vector<double>& x_nodes,
                                Side side) {
  if (!(y > 0.0)) throw DomainError("explicit_trace: height must be positive");
  ExplicitEvaluator e(u0, side);
  std::vector<Mat> out;
  out.reserve(x_nodes.size());
  for (double x : x_nodes) out.push_back(e.evaluate(t, cd(x, y)));
  return out;
}

double relative_gap(const Mat& value, const Mat& reference) {
  const double scale = reference.cwiseAbs().maxCoeff();
  const double err = (value - reference).cwiseAbs().maxCoeff();
  return scale > 0.0 ? err / scale : err;
}

CompareReport compare_explicit_direct(const HardyField& u0, const dynamics::Trajectory& traj,
                                      const std::vector<double>& t_list, const std::vector<cd>& z_list,
                                      const std::vector<Side>& sides) {
  for (const cd& z : z_list)
    if (!(z.imag() > 0.0)) throw DomainError("compare: Im z must be positive");
  require_same_grid(u0.grid(), traj.config.grid(), "compare");
  CompareReport rep;
  rep.direct_seconds = traj.wall_seconds;
  const auto start = std::chrono::steady_clock::now();
  std::vector<ExplicitEvaluator> evals;
  for (Side s : sides) evals.emplace_back(u0, s);
  for (double t : t_list) {
    const auto* snap = traj.at(t);
    if (!snap) throw DomainError("compare: requested time is not a snapshot of the direct run");
    for (const cd& z : z_list) {
      const Mat direct = hardy::poisson_eval(snap->u, z);
      std::vector<Mat> values;
      for (auto& e : evals) {
        ComparisonRow row;
        row.t = t;
        row.z = z;
        row.side = e.side();
        row.value = e.evaluate(t, z);
        row.direct = direct;
        row.abs_err = (row.value - direct).cwiseAbs().maxCoeff();
        row.rel_err = relative_gap(row.value, direct);
        rep.max_abs_err = std::max(rep.max_abs_err, row.abs_err);
        rep.max_rel_err = std::max(rep.max_rel_err, row.rel_err);
        values.push_back(row.value);
        rep.rows.push_back(std::move(row));
      }
      for (std::size_t i = 1; i < values.size(); ++i)
        rep.max_side_gap = std::max(rep.max_side_gap, relative_gap(values[i], values[0]));
    }
  }
  for (const auto& e : evals) rep.max_condition = std::max(rep.max_condition, e.max_condition());
  rep.explicit_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

CompareReport compare_explicit_direct(const HardyField& u0, const dynamics::SimConfig& config,
                                      const std::vector<double>& t_list, const std::vector<cd>& z_list,
                                      const std::vector<Side>& sides) {
  for (const cd& z : z_list)
    if (!(z.imag() > 0.0)) throw DomainError("compare: Im z must be positive");
  dynamics::SimConfig cfg = config;
  for (double t : t_list) {
    cfg.extra_times.push_back(t);
    cfg.t_final = std::max(cfg.t_final, t);
  }
  return compare_explicit_direct(u0, dynamics::integrate(u0.base(), cfg), t_list, z_list, sides);
}

}  // namespace szego::explicit_formula
