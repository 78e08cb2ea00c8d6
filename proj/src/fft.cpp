#include "szego/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace szego::fft {

namespace {

struct Plan {
  int n = 0;
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr, bwd = nullptr;

  explicit Plan(int len) : n(len) {
    buf = fftw_alloc_complex(n);
    fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Plan() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buf);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  void run(Eigen::Ref<Eigen::VectorXcd> v, bool forward) {
    auto* p = reinterpret_cast<cd*>(buf);
    for (int i = 0; i < n; ++i) p[i] = v[i];
    fftw_execute(forward ? fwd : bwd);
    for (int i = 0; i < n; ++i) v[i] = p[i];
  }
};

// FFTW planning is not reentrant; transforms reuse one buffer per length,
// so the whole call is serialized.
std::mutex& fft_mutex() {
  static std::mutex m;
  return m;
}

Plan& plan_for(int n) {
  static std::map<int, std::unique_ptr<Plan>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<Plan>(n)).first;
  return *it->second;
}

int good_length(int n) {
  int l = 1;
  while (l < n) l <<= 1;
  // 3 * 2^k is often closer and FFTW handles it well.
  if (l % 4 == 0 && 3 * (l / 4) >= n) return 3 * (l / 4);
  return l;
}

}  // namespace

BlockSeq block_convolve(const BlockSeq& a, const BlockSeq& b, int lo, int count, int pad_factor) {
  if (a.cols != b.rows) throw ShapeError("block_convolve: inner dimension mismatch");
  const int full = a.length() + b.length() - 1;
  const int len = good_length(std::max(full, pad_factor * std::max(a.length(), b.length())));

  std::lock_guard<std::mutex> lock(fft_mutex());
  Plan& plan = plan_for(len);

  auto spectra = [&](const BlockSeq& s) {
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(len, s.rows * s.cols);
    for (int e = 0; e < s.rows * s.cols; ++e) {
      f.col(e).head(s.length()) = s.data.col(e);
      plan.run(f.col(e), true);
    }
    return f;
  };
  const Eigen::MatrixXcd fa = spectra(a);
  const Eigen::MatrixXcd fb = spectra(b);

  BlockSeq c;
  c.rows = a.rows;
  c.cols = b.cols;
  c.first = lo;
  c.data = Eigen::MatrixXcd::Zero(count, c.rows * c.cols);
  // Full-convolution index n sits at circular position n - a.first - b.first.
  const int shift = a.first + b.first;
  Eigen::VectorXcd acc(len);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < b.cols; ++j) {
      acc.setZero();
      for (int m = 0; m < a.cols; ++m) acc += fa.col(i * a.cols + m).cwiseProduct(fb.col(m * b.cols + j));
      plan.run(acc, false);
      for (int r = 0; r < count; ++r) {
        const int pos = lo + r - shift;
        if (pos >= 0 && pos < full) c.data(r, i * c.cols + j) = acc[pos] / static_cast<double>(len);
      }
    }
  return c;
}

BlockSeq reverse_adjoint(const BlockSeq& a) {
  BlockSeq r;
  r.rows = a.cols;
  r.cols = a.rows;
  r.first = -a.last();
  r.data.resize(a.length(), r.rows * r.cols);
  const int n = a.length();
  for (int t = 0; t < n; ++t)
    for (int i = 0; i < a.rows; ++i)
      for (int j = 0; j < a.cols; ++j) r.data(n - 1 - t, j * r.cols + i) = std::conj(a.data(t, i * a.cols + j));
  return r;
}

}  // namespace szego::fft
