#include "simplexdyn/aitchison.hpp"

#include <cfloat>
#include <cmath>
#include <string>

namespace simplexdyn {

namespace {

void require_same_size(int a, int b) {
  if (a != b)
    throw Error(ErrorCode::DimensionMismatch,
                "sizes " + std::to_string(a) + " and " + std::to_string(b));
}

void require_log_safe(const Composition& p) {
  for (int i = 0; i < p.size(); ++i)
    if (p[i] < kMinLogEntry)
      throw Error(ErrorCode::BoundaryProximity,
                  "entry " + std::to_string(i) + " below 1e-300");
}

Vector logs(const Composition& p) {
  require_log_safe(p);
  return p.entries().array().log().matrix();
}

}  // namespace

Composition::Composition(Vector entries) : p_(std::move(entries)) {
  if (p_.size() < 2) throw Error(ErrorCode::BadDimension, "composition needs n >= 2");
  double s = 0.0;
  for (int i = 0; i < p_.size(); ++i) {
    if (!std::isfinite(p_[i]) || p_[i] <= 0.0)
      throw Error(ErrorCode::NonPositiveEntry, "entry " + std::to_string(i) + " = " +
                                                   std::to_string(p_[i]));
    s += p_[i];
  }
  if (std::abs(s - 1.0) > kSumTolerance)
    throw Error(ErrorCode::BadValue, "entries sum to " + std::to_string(s));
  p_ /= s;
}

Composition Composition::barycenter(int n) {
  if (n < 2) throw Error(ErrorCode::BadDimension, "n < 2");
  return Composition(Vector::Constant(n, 1.0 / n));
}

TangentVector::TangentVector(Vector entries) : x_(std::move(entries)) {
  double s = 0.0, scale = 1.0;
  for (int i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i])) throw Error(ErrorCode::BadValue, "non-finite tangent entry");
    s += x_[i];
    scale += std::abs(x_[i]);
  }
  if (std::abs(s) > kSumTolerance * scale)
    throw Error(ErrorCode::BadValue, "tangent entries sum to " + std::to_string(s));
}

IlrPoint::IlrPoint(Vector coords) : x_(std::move(coords)) {
  if (!x_.allFinite()) throw Error(ErrorCode::BadValue, "non-finite ilr coordinate");
}

Composition closure(const Vector& v) {
  if (v.size() < 2) throw Error(ErrorCode::BadDimension, "closure needs n >= 2");
  for (int i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i]) || v[i] <= 0.0)
      throw Error(ErrorCode::NonPositiveEntry, "entry " + std::to_string(i));
  const double s = v.sum();
  if (!std::isfinite(s)) {
    // rescale before summing so huge entries do not overflow
    const Vector w = v / v.maxCoeff();
    return Composition(w / w.sum());
  }
  return Composition(v / s);
}

Composition perturb(const Composition& p, const Composition& q) {
  require_same_size(p.size(), q.size());
  return closure(p.entries().cwiseProduct(q.entries()));
}

Composition power(double alpha, const Composition& p) {
  if (!std::isfinite(alpha)) throw Error(ErrorCode::BadValue, "non-finite power");
  // via logs so large |alpha| cannot overflow
  Vector x = alpha * logs(p);
  return sfm(x);
}

Composition inverse(const Composition& p) { return power(-1.0, p); }

Composition ominus(const Composition& p, const Composition& q) {
  require_same_size(p.size(), q.size());
  Vector x = logs(p) - logs(q);
  return sfm(x);
}

double inner(const Composition& p, const Composition& q) {
  require_same_size(p.size(), q.size());
  const Vector lp = logs(p), lq = logs(q);
  const int n = p.size();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += (lp[i] - lp[j]) * (lq[i] - lq[j]);
  return s / (2.0 * n);
}

double norm(const Composition& p) { return std::sqrt(std::max(0.0, inner(p, p))); }

double dist(const Composition& p, const Composition& q) {
  require_same_size(p.size(), q.size());
  const Vector lp = logs(p), lq = logs(q);
  const int n = p.size();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d = (lp[i] - lp[j]) - (lq[i] - lq[j]);
      s += d * d;
    }
  return std::sqrt(s / (2.0 * n));
}

TangentVector clr(const Composition& p) {
  Vector l = logs(p);
  l.array() -= l.mean();
  return TangentVector(std::move(l));
}

void sfm_into(const Vector& x, Vector& out) {
  out.resize(x.size());
  const double m = x.maxCoeff();
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    out[i] = std::exp(x[i] - m);
    s += out[i];
  }
  for (int i = 0; i < x.size(); ++i) out[i] = std::max(out[i] / s, DBL_MIN);
}

Composition sfm(const Vector& x) {
  if (x.size() < 2) throw Error(ErrorCode::BadDimension, "sfm needs n >= 2");
  if (!x.allFinite()) throw Error(ErrorCode::BadValue, "non-finite sfm argument");
  Vector out;
  sfm_into(x, out);
  return Composition(std::move(out));
}

Composition sfm(const TangentVector& x) { return sfm(x.entries()); }

ContrastMatrix contrast_matrix(int n) {
  if (n < 2) throw Error(ErrorCode::BadDimension, "contrast matrix needs n >= 2");
  Matrix psi = Matrix::Zero(n - 1, n);
  for (int k = 1; k < n; ++k) {
    const double c = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int j = 0; j < k; ++j) psi(k - 1, j) = c;
    psi(k - 1, k) = -k * c;
  }
  return ContrastMatrix{std::move(psi)};
}

IlrPoint ilr(const Composition& p, const ContrastMatrix& c) {
  require_same_size(p.size(), c.n());
  return IlrPoint(c.psi * clr(p).entries());
}

IlrPoint ilr(const Composition& p) { return ilr(p, contrast_matrix(p.size())); }

Composition ilr_inv(const IlrPoint& x, const ContrastMatrix& c) {
  require_same_size(x.size(), c.n() - 1);
  return sfm(Vector(c.psi.transpose() * x.coords()));
}

Composition ilr_inv(const IlrPoint& x) { return ilr_inv(x, contrast_matrix(x.size() + 1)); }

Matrix shahshahani_inv(const Composition& p) {
  const Vector& v = p.entries();
  Matrix g = -v * v.transpose();
  g.diagonal() += v;
  return g;
}

Matrix sfm_jacobian(const Vector& x) {
  const Vector s = sfm(x).entries();
  Matrix j = s.asDiagonal();
  j -= s * s.transpose();
  return j;
}

Vector shahshahani_gradient(const Vector& euclid_grad, const Composition& p) {
  require_same_size(static_cast<int>(euclid_grad.size()), p.size());
  const Vector& v = p.entries();
  // g^{-1} grad = p * (grad - p.grad), without forming the matrix
  return v.cwiseProduct(euclid_grad.array().matrix() -
                        Vector::Constant(v.size(), v.dot(euclid_grad)));
}

Composition aitchison_gradient(const Vector& euclid_grad, const Composition& p) {
  return sfm(shahshahani_gradient(euclid_grad, p));
}

double aitchison_log_density(const Composition& p) { return -logs(p).sum(); }

}  // namespace simplexdyn
