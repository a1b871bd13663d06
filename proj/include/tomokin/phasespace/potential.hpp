#pragma once

#include <span>
#include <variant>
#include <vector>

namespace tomokin::phasespace {

struct Free {};

// U = omega^2 q^2 / 2
struct Harmonic {
  double omega = 1.0;
};

// U = sum_k coefficients[k] q^k, degree <= 6.
struct Polynomial {
  std::vector<double> coefficients;
};

// Pair profile u(r) sampled at r_k = k*dr. Derivatives are spectral on the
// even extension of the samples, so u'(0) = u'(r_max) = 0 is implied.
class TabulatedProfile {
 public:
  TabulatedProfile(double dr, std::vector<double> samples);
  double dr() const { return dr_; }
  double r_max() const { return dr_ * static_cast<double>(samples_.size() - 1); }
  const std::vector<double>& samples() const { return samples_; }
  double value(double r) const;
  double derivative(double r) const;

 private:
  double dr_;
  std::vector<double> samples_, slope_;
};

using OneBody = std::variant<Free, Harmonic, Polynomial>;

// U = sum_{i<j} u(|q_i - q_j|) + sum_j external(q_j).
struct Pair {
  std::variant<Polynomial, TabulatedProfile> profile;
  OneBody external = Free{};
};

using PotentialSpec = std::variant<Free, Harmonic, Polynomial, Pair>;

void validate(const PotentialSpec& u);

bool is_pair(const PotentialSpec& u);
const char* kind_name(const PotentialSpec& u);

// Coefficients of U'(q) for a one-body potential (empty for Free).
std::vector<double> force_coefficients(const OneBody& v);
// One-body part of any spec: the whole potential, or Pair::external.
OneBody one_body_part(const PotentialSpec& u);

double one_body_value(const OneBody& v, double q);
double one_body_derivative(const OneBody& v, double q);
double pair_value(const Pair& u, double r);
// u'(r), r >= 0.
double pair_derivative(const Pair& u, double r);
// u'(|d|) sgn(d) with sgn(0) = 0.
double pair_kernel(const Pair& u, double d);

double energy(const PotentialSpec& u, std::span<const double> q,
              std::span<const double> p);
// dU/dq_j for every particle.
void gradient(const PotentialSpec& u, std::span<const double> q,
              std::span<double> grad);

// If dU/dq is affine in q, returns K (row-major N x N) and b with
// grad = K q + b.
struct AffineForce {
  std::vector<double> K, b;
};
bool affine_force(const PotentialSpec& u, std::size_t particles, AffineForce& out);

}  // namespace tomokin::phasespace
