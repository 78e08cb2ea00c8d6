#include "szego/hardy.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include <json.hpp>

namespace szego::hardy {

HardyField::HardyField(const FreqGrid& grid, int rows, int cols, bool with_tail)
    : grid_(grid), rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw ShapeError("field: empty matrix shape");
  const int n = with_tail ? 2 * grid.points() - 1 : grid.points();
  data_ = Eigen::MatrixXcd::Zero(n, rows * cols);
}

Mat HardyField::sample(int k) const {
  Mat a(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) a(i, j) = value(k, i, j);
  return a;
}

void HardyField::set_sample(int k, const Mat& a) {
  if (a.rows() != rows_ || a.cols() != cols_) throw ShapeError("field: sample shape mismatch");
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) data_(k, i * cols_ + j) = a(i, j);
}

HardyField HardyField::base() const {
  HardyField r(grid_, rows_, cols_, false);
  r.data_ = data_.topRows(grid_.points());
  return r;
}

HardyField HardyField::with_tail() const {
  HardyField r(grid_, rows_, cols_, true);
  r.data_.topRows(nodes()) = data_;
  return r;
}

HardyField& HardyField::operator+=(const HardyField& o) {
  require_same_grid(grid_, o.grid_, "field add");
  if (o.rows_ != rows_ || o.cols_ != cols_ || o.nodes() != nodes()) throw ShapeError("field add: shape mismatch");
  data_ += o.data_;
  return *this;
}

HardyField& HardyField::operator-=(const HardyField& o) {
  require_same_grid(grid_, o.grid_, "field subtract");
  if (o.rows_ != rows_ || o.cols_ != cols_ || o.nodes() != nodes()) throw ShapeError("field subtract: shape mismatch");
  data_ -= o.data_;
  return *this;
}

HardyField& HardyField::operator*=(cd s) {
  data_ *= s;
  return *this;
}

SymbolField::SymbolField(const FreqGrid& grid, int rows, int cols) : grid_(grid), rows_(rows), cols_(cols) {
  pos_ = Eigen::MatrixXcd::Zero(grid.points(), rows * cols);
  neg_ = Eigen::MatrixXcd::Zero(grid.points(), rows * cols);
}

Mat SymbolField::pos_sample(int j) const {
  Mat a(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int c = 0; c < cols_; ++c) a(i, c) = pos_(j, i * cols_ + c);
  return a;
}

Mat SymbolField::neg_sample(int j) const {
  Mat a(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int c = 0; c < cols_; ++c) a(i, c) = neg_(j, i * cols_ + c);
  return a;
}

Mat SymbolField::sample(int n) const {
  if (n > 0) return pos_sample(n);
  if (n < 0) return neg_sample(-n);
  return 0.5 * (pos_sample(0) + neg_sample(0));
}

bool SymbolField::continuous_at_zero(double tol) const {
  return (pos_.row(0) - neg_.row(0)).cwiseAbs().maxCoeff() <= tol;
}

void RationalDatum::validate() const {
  if (rows < 1 || cols < 1) throw ShapeError("datum: empty matrix shape");
  if (poles.size() != residues.size()) throw ShapeError("datum: poles and residues differ in count");
  for (const cd& p : poles)
    if (!(p.imag() < 0.0)) throw DomainError("datum: pole outside the lower half-plane");
  for (const Mat& a : residues)
    if (a.rows() != rows || a.cols() != cols) throw ShapeError("datum: residue shape mismatch");
}

RationalDatum parse_rational_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  RationalDatum d;
  if (j.contains("shape")) {
    d.rows = j.at("shape").at(0).get<int>();
    d.cols = j.at("shape").at(1).get<int>();
  }
  for (const auto& p : j.at("poles")) d.poles.emplace_back(p.at("re").get<double>(), p.at("im").get<double>());
  for (const auto& r : j.at("residues")) {
    if (static_cast<int>(r.size()) != d.rows * d.cols) throw ShapeError("datum: residue entry count mismatch");
    Mat a(d.rows, d.cols);
    for (int e = 0; e < d.rows * d.cols; ++e) a(e / d.cols, e % d.cols) = cd(r[e].at(0).get<double>(), r[e].at(1).get<double>());
    d.residues.push_back(a);
  }
  d.validate();
  return d;
}

std::string rational_to_json(const RationalDatum& datum) {
  nlohmann::json j;
  j["shape"] = {datum.rows, datum.cols};
  j["poles"] = nlohmann::json::array();
  for (const cd& p : datum.poles) j["poles"].push_back({{"re", p.real()}, {"im", p.imag()}});
  j["residues"] = nlohmann::json::array();
  for (const Mat& a : datum.residues) {
    nlohmann::json r = nlohmann::json::array();
    for (int e = 0; e < datum.rows * datum.cols; ++e) {
      const cd v = a(e / datum.cols, e % datum.cols);
      r.push_back({v.real(), v.imag()});
    }
    j["residues"].push_back(r);
  }
  return j.dump();
}

SymbolField embed(const HardyField& u) {
  SymbolField v(u.grid(), u.rows(), u.cols());
  v.pos() = u.data().topRows(u.grid().points());
  return v;
}

HardyField szego_project(const SymbolField& f) {
  HardyField u(f.grid(), f.rows(), f.cols(), false);
  u.data() = f.pos();
  return u;
}

namespace {

cd weighted_pairing(const FreqGrid& g, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  cd s = 0.0;
  for (int k = 0; k < g.points(); ++k) s += g.weight(k) * a.row(k).dot(b.row(k));
  return s;
}

}  // namespace

cd inner(const HardyField& f, const HardyField& g) {
  require_same_grid(f.grid(), g.grid(), "inner");
  if (f.rows() != g.rows() || f.cols() != g.cols()) throw ShapeError("inner: shape mismatch");
  const int k = f.grid().points();
  // dot() conjugates its left argument: tr(F G*) = sum conj(G) F.
  return weighted_pairing(f.grid(), g.data().topRows(k), f.data().topRows(k)) / kTwoPi;
}

double norm2(const HardyField& f) { return inner(f, f).real(); }

cd inner(const SymbolField& f, const SymbolField& g) {
  require_same_grid(f.grid(), g.grid(), "inner");
  if (f.rows() != g.rows() || f.cols() != g.cols()) throw ShapeError("inner: shape mismatch");
  return (weighted_pairing(f.grid(), g.pos(), f.pos()) + weighted_pairing(f.grid(), g.neg(), f.neg())) / kTwoPi;
}

Mat poisson_eval(const HardyField& u, cd z) {
  if (!(z.imag() > 0.0)) throw DomainError("poisson_eval: Im z must be positive");
  const FreqGrid& g = u.grid();
  Eigen::RowVectorXcd acc = Eigen::RowVectorXcd::Zero(u.rows() * u.cols());
  const std::vector<cd> c = oscillatory_weights(g, z);
  for (int k = 0; k < g.points(); ++k) acc += c[k] * u.data().row(k);
  Mat r(u.rows(), u.cols());
  for (int e = 0; e < u.rows() * u.cols(); ++e) r(e / u.cols(), e % u.cols()) = acc(e) / kTwoPi;
  return r;
}

std::vector<Mat> boundary_trace(const HardyField& u, double y, const std::vector<double>& x_nodes) {
  if (!(y > 0.0)) throw DomainError("boundary_trace: height must be positive");
  std::vector<Mat> out;
  out.reserve(x_nodes.size());
  for (double x : x_nodes) out.push_back(poisson_eval(u, cd(x, y)));
  return out;
}

HardyField chi_eps(double eps, const FreqGrid& grid, bool with_tail) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("chi_eps: eps must lie in (0,1)");
  HardyField u(grid, 1, 1, with_tail);
  for (int k = 0; k < u.nodes(); ++k) u(k, 0, 0) = kTwoPi / eps * std::exp(-grid.node(k) / eps);
  return u;
}

HardyField transpose_field(const HardyField& u) {
  HardyField t(u.grid(), u.cols(), u.rows(), u.has_tail());
  for (int k = 0; k < u.nodes(); ++k)
    for (int i = 0; i < u.rows(); ++i)
      for (int j = 0; j < u.cols(); ++j) t(k, j, i) = u(k, i, j);
  return t;
}

SymbolField transpose_symbol(const SymbolField& v) {
  SymbolField t(v.grid(), v.cols(), v.rows());
  for (int i = 0; i < v.rows(); ++i)
    for (int j = 0; j < v.cols(); ++j) {
      t.pos().col(j * v.rows() + i) = v.pos().col(i * v.cols() + j);
      t.neg().col(j * v.rows() + i) = v.neg().col(i * v.cols() + j);
    }
  return t;
}

HardyField rational_to_field(const RationalDatum& datum, const FreqGrid& grid, bool with_tail) {
  datum.validate();
  HardyField u(grid, datum.rows, datum.cols, with_tail);
  for (std::size_t p = 0; p < datum.poles.size(); ++p) {
    const cd pole = datum.poles[p];
    for (int k = 0; k < u.nodes(); ++k) {
      const cd f = cd(0.0, -kTwoPi) * std::exp(cd(0.0, -1.0) * pole * grid.node(k));
      for (int i = 0; i < datum.rows; ++i)
        for (int j = 0; j < datum.cols; ++j) u(k, i, j) += f * datum.residues[p](i, j);
    }
  }
  return u;
}

Mat rational_value(const RationalDatum& datum, cd z) {
  Mat r = Mat::Zero(datum.rows, datum.cols);
  for (std::size_t p = 0; p < datum.poles.size(); ++p) r += datum.residues[p] / (z - datum.poles[p]);
  return r;
}

double tail_fraction(const HardyField& u) {
  const FreqGrid& g = u.grid();
  double total = 0.0, tail = 0.0;
  for (int k = 0; k < g.points(); ++k) {
    const double m = g.weight(k) * u.data().row(k).squaredNorm();
    total += m;
    if (g.node(k) > 0.9 * g.xi_max()) tail += m;
  }
  return total > 0.0 ? tail / total : 0.0;
}

void write_field_csv(std::ostream& os, const HardyField& u) {
  os << "xi,row,col,re,im\n" << std::setprecision(17);
  for (int k = 0; k < u.grid().points(); ++k)
    for (int i = 0; i < u.rows(); ++i)
      for (int j = 0; j < u.cols(); ++j)
        os << u.grid().node(k) << ',' << i << ',' << j << ',' << u(k, i, j).real() << ',' << u(k, i, j).imag() << '\n';
}

void write_symbol_csv(std::ostream& os, const SymbolField& v) {
  os << "xi,row,col,re,im\n" << std::setprecision(17);
  const int k = v.grid().points();
  for (int n = -(k - 1); n < k; ++n) {
    const Mat a = v.sample(n);
    for (int i = 0; i < v.rows(); ++i)
      for (int j = 0; j < v.cols(); ++j)
        os << n * v.grid().spacing() << ',' << i << ',' << j << ',' << a(i, j).real() << ',' << a(i, j).imag() << '\n';
  }
}

}  // namespace szego::hardy
