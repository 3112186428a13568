#include "swarmflow/nonlocal.hpp"

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <stdexcept>

namespace swarmflow {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_len(std::size_t got, int n) {
  if (got != static_cast<std::size_t>(n))
    throw std::invalid_argument("convolution length mismatch: got " + std::to_string(got) + ", expected " +
                                std::to_string(n));
}

}  // namespace

struct ConvolutionPlan::FftData {
  int N = 0;
  std::vector<std::complex<double>> spectrum;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~FftData() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

ConvolutionPlan::ConvolutionPlan(const Grid& g, const std::function<double(double)>& kernel, ConvMethod method)
    : method_(method), n_(g.n_cells), dx_(g.dx) {
  samples_.resize(static_cast<std::size_t>(2 * n_ - 1));
  for (int k = -(n_ - 1); k <= n_ - 1; ++k) samples_[static_cast<std::size_t>(k + n_ - 1)] = kernel(k * dx_);
  init();
}

ConvolutionPlan::ConvolutionPlan(std::vector<double> samples, int n, double dx, ConvMethod method)
    : method_(method), n_(n), dx_(dx), samples_(std::move(samples)) {
  if (samples_.size() != static_cast<std::size_t>(2 * n - 1))
    throw std::invalid_argument("kernel samples must have length 2n-1");
  init();
}

ConvolutionPlan ConvolutionPlan::with_method(ConvMethod m) const {
  return ConvolutionPlan(samples_, n_, dx_, m);
}

void ConvolutionPlan::init() {
  if (method_ != ConvMethod::fft) return;
  auto d = std::make_shared<FftData>();
  d->N = 2 * n_;
  const int N = d->N;
  const int M = N / 2 + 1;
  std::vector<double> k(static_cast<std::size_t>(N), 0.0);
  for (int m = 0; m < n_; ++m) k[static_cast<std::size_t>(m)] = sample(m);
  for (int m = 1; m < n_; ++m) k[static_cast<std::size_t>(N - m)] = sample(-m);
  d->spectrum.resize(static_cast<std::size_t>(M));
  std::vector<double> scratch(static_cast<std::size_t>(N));
  std::vector<std::complex<double>> cscratch(static_cast<std::size_t>(M));
  {
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    d->forward = fftw_plan_dft_r2c_1d(N, scratch.data(), reinterpret_cast<fftw_complex*>(cscratch.data()), flags);
    d->backward = fftw_plan_dft_c2r_1d(N, reinterpret_cast<fftw_complex*>(cscratch.data()), scratch.data(), flags);
  }
  if (!d->forward || !d->backward) throw std::runtime_error("FFTW planning failed");
  fftw_execute_dft_r2c(d->forward, k.data(), reinterpret_cast<fftw_complex*>(d->spectrum.data()));
  const double scale = dx_ / N;
  for (auto& c : d->spectrum) c *= scale;
  fft_ = std::move(d);
}

std::vector<double> ConvolutionPlan::convolve(std::span<const double> f) const {
  std::vector<double> out(static_cast<std::size_t>(n_));
  convolve_into(f, out);
  return out;
}

void ConvolutionPlan::convolve_into(std::span<const double> f, std::span<double> out) const {
  check_len(f.size(), n_);
  check_len(out.size(), n_);
  if (method_ == ConvMethod::direct) {
    const int n = n_;
    const double* K = samples_.data() + (n - 1);
    const double* fp = f.data();
    double* op = out.data();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += K[i - j] * fp[j];
      op[i] = dx_ * s;
    }
    return;
  }
  const int N = fft_->N;
  std::vector<double> buf(static_cast<std::size_t>(N), 0.0);
  std::vector<std::complex<double>> spec(fft_->spectrum.size());
  std::copy(f.begin(), f.end(), buf.begin());
  fftw_execute_dft_r2c(fft_->forward, buf.data(), reinterpret_cast<fftw_complex*>(spec.data()));
  for (std::size_t m = 0; m < spec.size(); ++m) spec[m] *= fft_->spectrum[m];
  fftw_execute_dft_c2r(fft_->backward, reinterpret_cast<fftw_complex*>(spec.data()), buf.data());
  std::copy(buf.begin(), buf.begin() + n_, out.begin());
}

std::vector<double> alignment_acceleration(const ConvolutionPlan& phi, std::span<const double> rho,
                                           std::span<const double> u) {
  const auto n = rho.size();
  check_len(u.size(), static_cast<int>(n));
  std::vector<double> ru(n);
  for (std::size_t i = 0; i < n; ++i) ru[i] = rho[i] * u[i];
  auto a = phi.convolve(ru);
  auto b = phi.convolve(rho);
  for (std::size_t i = 0; i < n; ++i) a[i] -= u[i] * b[i];
  return a;
}

std::vector<double> commutator(const ConvolutionPlan& phi, std::span<const double> rho, std::span<const double> u) {
  auto c = alignment_acceleration(phi, rho, u);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= rho[i];
  return c;
}

NonlocalOperators make_operators(const Grid& g, const InteractionPotential& W, const CommunicationWeight& phi,
                                 ConvMethod method) {
  const auto capped = with_default_cap(phi, g.dx);
  NonlocalOperators ops;
  ops.W = ConvolutionPlan(g, [&](double x) { return eval_potential(W, x); }, method);
  ops.dW = ConvolutionPlan(g, [&](double x) { return eval_potential_deriv(W, x); }, method);
  ops.phi = ConvolutionPlan(g, [&](double x) { return eval_phi(capped, x, true); }, method);
  return ops;
}

namespace reference {

std::vector<double> convolve_direct(const ConvolutionPlan& plan, std::span<const double> f) {
  const int n = plan.size();
  check_len(f.size(), n);
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += plan.sample(i - j) * f[static_cast<std::size_t>(j)];
    g[static_cast<std::size_t>(i)] = plan.dx() * s;
  }
  return g;
}

double alignment_double_sum(const ConvolutionPlan& phi, std::span<const double> rho, std::span<const double> u) {
  const int n = phi.size();
  check_len(rho.size(), n);
  check_len(u.size(), n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double du = u[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(j)];
      s += phi.sample(i - j) * du * du * rho[static_cast<std::size_t>(i)] * rho[static_cast<std::size_t>(j)];
    }
  }
  return 0.5 * phi.dx() * phi.dx() * s;
}

}  // namespace reference

namespace parallel {

double alignment_double_sum(const ConvolutionPlan& phi, std::span<const double> rho, std::span<const double> u) {
  const int n = phi.size();
  check_len(rho.size(), n);
  check_len(u.size(), n);
  std::vector<double> row(static_cast<std::size_t>(n));
  const double* K = phi.samples().data() + (n - 1);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    const double ui = u[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      const double du = ui - u[static_cast<std::size_t>(j)];
      s += K[i - j] * du * du * rho[static_cast<std::size_t>(j)];
    }
    row[static_cast<std::size_t>(i)] = s * rho[static_cast<std::size_t>(i)];
  }
  double s = 0.0;
  for (double v : row) s += v;
  return 0.5 * phi.dx() * phi.dx() * s;
}

}  // namespace parallel

}  // namespace swarmflow
