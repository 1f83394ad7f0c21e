#include "pathqv/fbm.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "pathqv/error.hpp"

namespace pathqv {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw ResourceLimitError("fftw_malloc failed");
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

void forward_fft(FftwBuffer& buf, std::size_t n) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), buf.data, buf.data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

constexpr std::size_t kCholeskyLimit = 4096;

std::vector<double> fgn_circulant(double hurst, std::size_t n, RngStream& rng, bool& ok) {
  const std::size_t m = 2 * n;
  FftwBuffer buf(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t lag = j <= n ? j : m - j;
    buf.data[j][0] = fgn_autocovariance(hurst, lag);
    buf.data[j][1] = 0.0;
  }
  forward_fft(buf, m);
  std::vector<double> lambda(m);
  double lmax = 0.0;
  double lmin = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    lambda[j] = buf.data[j][0];
    lmax = std::max(lmax, lambda[j]);
    lmin = std::min(lmin, lambda[j]);
  }
  ok = lmin >= -1e-10 * lmax;
  std::normal_distribution<double> nd;
  for (std::size_t j = 0; j < m; ++j) {
    const double s = std::sqrt(std::max(lambda[j], 0.0) / static_cast<double>(m));
    buf.data[j][0] = s * nd(rng);
    buf.data[j][1] = s * nd(rng);
  }
  forward_fft(buf, m);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = buf.data[j][0];
  return out;
}

std::vector<double> fgn_cholesky(double hurst, std::size_t n, RngStream& rng) {
  if (n > kCholeskyLimit) throw ResourceLimitError("Cholesky fBm limited to 4096 steps");
  Eigen::MatrixXd cov(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cov(i, j) = fgn_autocovariance(hurst, i > j ? i - j : j - i);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw_domain("fGn covariance is not positive definite");
  Eigen::VectorXd z(n);
  std::normal_distribution<double> nd;
  for (std::size_t i = 0; i < n; ++i) z(i) = nd(rng);
  const Eigen::VectorXd x = llt.matrixL() * z;
  return std::vector<double>(x.data(), x.data() + n);
}

}  // namespace

double fgn_autocovariance(double hurst, std::size_t k) {
  const double h2 = 2.0 * hurst;
  const double kk = static_cast<double>(k);
  if (k == 0) return 1.0;
  return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(kk - 1.0, h2));
}

std::vector<double> sample_fbm(double hurst, std::size_t steps, double horizon, RngStream& rng,
                               FbmMethod method) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw_domain("Hurst index must lie in (0, 1)");
  if (steps == 0) throw_domain("fBm needs at least one step");
  std::vector<double> noise;
  if (method == FbmMethod::Cholesky) {
    noise = fgn_cholesky(hurst, steps, rng);
  } else {
    bool ok = true;
    noise = fgn_circulant(hurst, steps, rng, ok);
    if (!ok) {
      if (method == FbmMethod::CirculantEmbedding || steps > kCholeskyLimit) {
        throw_domain("circulant embedding has negative eigenvalues");
      }
      noise = fgn_cholesky(hurst, steps, rng);
    }
  }
  // Self-similarity: increments over a step dt have standard deviation dt^H.
  const double scale = std::pow(horizon / static_cast<double>(steps), hurst);
  std::vector<double> path(steps + 1);
  path[0] = 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < steps; ++j) {
    acc += scale * noise[j];
    path[j + 1] = acc;
  }
  return path;
}

}  // namespace pathqv
