#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "swarmflow/core.hpp"
#include "swarmflow/kernels.hpp"

namespace swarmflow {

enum class ConvMethod { direct, fft };

// Midpoint quadrature of the domain-truncated convolution:
//   g[i] = dx * sum_j K(x_i - x_j) f[j].
class ConvolutionPlan {
 public:
  ConvolutionPlan() = default;
  ConvolutionPlan(const Grid& g, const std::function<double(double)>& kernel, ConvMethod method = ConvMethod::fft);
  // samples[k + n - 1] = K(k dx) for k in [-(n-1), n-1]
  ConvolutionPlan(std::vector<double> samples, int n, double dx, ConvMethod method = ConvMethod::fft);

  std::vector<double> convolve(std::span<const double> f) const;
  void convolve_into(std::span<const double> f, std::span<double> out) const;

  ConvMethod method() const { return method_; }
  int size() const { return n_; }
  double dx() const { return dx_; }
  const std::vector<double>& samples() const { return samples_; }
  double sample(int k) const { return samples_[static_cast<std::size_t>(k + n_ - 1)]; }
  ConvolutionPlan with_method(ConvMethod m) const;

 private:
  struct FftData;
  void init();

  ConvMethod method_ = ConvMethod::fft;
  int n_ = 0;
  double dx_ = 0.0;
  std::vector<double> samples_;
  std::shared_ptr<const FftData> fft_;
};

// rho * (phi*(rho u) - u phi*rho)
std::vector<double> commutator(const ConvolutionPlan& phi, std::span<const double> rho, std::span<const double> u);
// phi*(rho u) - u phi*rho, the alignment acceleration (commutator divided by rho)
std::vector<double> alignment_acceleration(const ConvolutionPlan& phi, std::span<const double> rho,
                                           std::span<const double> u);

struct NonlocalOperators {
  ConvolutionPlan W;    // potential values
  ConvolutionPlan dW;   // sampled a.e. derivative of the potential
  ConvolutionPlan phi;  // regularized communication weight
};

NonlocalOperators make_operators(const Grid& g, const InteractionPotential& W, const CommunicationWeight& phi,
                                 ConvMethod method = ConvMethod::fft);

namespace reference {

// Serial O(n^2) convolution over the plan's samples.
std::vector<double> convolve_direct(const ConvolutionPlan& plan, std::span<const double> f);
// 1/2 dx^2 sum_{i,j} phi(x_i - x_j)(u_i - u_j)^2 rho_i rho_j, serial.
double alignment_double_sum(const ConvolutionPlan& phi, std::span<const double> rho, std::span<const double> u);

}  // namespace reference

namespace parallel {

double alignment_double_sum(const ConvolutionPlan& phi, std::span<const double> rho, std::span<const double> u);

}  // namespace parallel

}  // namespace swarmflow
