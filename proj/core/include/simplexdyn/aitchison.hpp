#pragma once

#include <Eigen/Dense>

#include "simplexdyn/errors.hpp"

namespace simplexdyn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Entries below this are treated as the boundary by every log-taking operation.
inline constexpr double kMinLogEntry = 1e-300;
inline constexpr double kSumTolerance = 1e-12;

// A point of the open simplex. Construction validates positivity and the unit
// sum (to kSumTolerance) and divides by the sum to remove rounding drift.
class Composition {
 public:
  explicit Composition(Vector entries);

  static Composition barycenter(int n);

  int size() const { return static_cast<int>(p_.size()); }
  double operator[](int i) const { return p_[i]; }
  const Vector& entries() const { return p_; }

 private:
  Vector p_;
};

// clr-space vector; entries sum to zero.
class TangentVector {
 public:
  explicit TangentVector(Vector entries);

  int size() const { return static_cast<int>(x_.size()); }
  double operator[](int i) const { return x_[i]; }
  const Vector& entries() const { return x_; }

 private:
  Vector x_;
};

class IlrPoint {
 public:
  explicit IlrPoint(Vector coords);

  int size() const { return static_cast<int>(x_.size()); }
  double operator[](int i) const { return x_[i]; }
  const Vector& coords() const { return x_; }

 private:
  Vector x_;
};

// (n-1) x n, Helmert rows: row k is (1,...,1,-k,0,...,0) normalized.
struct ContrastMatrix {
  Matrix psi;
  int n() const { return static_cast<int>(psi.cols()); }
};

Composition closure(const Vector& v);
Composition perturb(const Composition& p, const Composition& q);
Composition power(double alpha, const Composition& p);
Composition inverse(const Composition& p);
Composition ominus(const Composition& p, const Composition& q);

double inner(const Composition& p, const Composition& q);
double norm(const Composition& p);
double dist(const Composition& p, const Composition& q);

TangentVector clr(const Composition& p);
Composition sfm(const Vector& x);
Composition sfm(const TangentVector& x);

ContrastMatrix contrast_matrix(int n);

IlrPoint ilr(const Composition& p);
IlrPoint ilr(const Composition& p, const ContrastMatrix& c);
Composition ilr_inv(const IlrPoint& x);
Composition ilr_inv(const IlrPoint& x, const ContrastMatrix& c);

Matrix shahshahani_inv(const Composition& p);
Matrix sfm_jacobian(const Vector& x);

Vector shahshahani_gradient(const Vector& euclid_grad, const Composition& p);
Composition aitchison_gradient(const Vector& euclid_grad, const Composition& p);

// -sum ln p_i, the log of the Aitchison-measure density in the first n-1 coordinates.
double aitchison_log_density(const Composition& p);

// Unchecked softmax for inner loops: out = exp(x - max) / sum, entries floored at DBL_MIN.
void sfm_into(const Vector& x, Vector& out);

}  // namespace simplexdyn
