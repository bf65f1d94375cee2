#pragma once

#include <cmath>
#include <initializer_list>
#include <string>

#include <Eigen/Core>

#include "liftscore/errors.hpp"

namespace liftscore {

/// Dense univariate polynomial stored in ascending powers: coefficient i
/// multiplies x^i. The coefficient vector is never empty.
template <typename Scalar>
class Polynomial {
 public:
  using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Polynomial() : coeffs_(Coefficients::Zero(1)) {}

  explicit Polynomial(Coefficients coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() == 0) {
      throw Error(ErrorKind::Config, "polynomial needs at least one coefficient");
    }
  }

  Polynomial(std::initializer_list<Scalar> coeffs) : coeffs_(coeffs.size()) {
    if (coeffs.size() == 0) {
      throw Error(ErrorKind::Config, "polynomial needs at least one coefficient");
    }
    Eigen::Index i = 0;
    for (Scalar c : coeffs) coeffs_(i++) = c;
  }

  Eigen::Index degree() const { return coeffs_.size() - 1; }
  const Coefficients& coefficients() const { return coeffs_; }
  Scalar operator[](Eigen::Index i) const { return coeffs_(i); }

  /// Horner evaluation, no argument checks.
  Scalar operator()(Scalar x) const {
    Scalar acc = coeffs_(degree());
    for (Eigen::Index i = degree() - 1; i >= 0; --i) acc = acc * x + coeffs_(i);
    return acc;
  }

  /// Coefficient-wise Horner over an array of abscissae.
  template <typename Derived>
  Eigen::Array<Scalar, Eigen::Dynamic, 1> operator()(
      const Eigen::ArrayBase<Derived>& xs) const {
    Eigen::Array<Scalar, Eigen::Dynamic, 1> acc =
        Eigen::Array<Scalar, Eigen::Dynamic, 1>::Constant(xs.size(), coeffs_(degree()));
    for (Eigen::Index i = degree() - 1; i >= 0; --i) acc = acc * xs.derived() + coeffs_(i);
    return acc;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.coeffs_.size() == b.coeffs_.size() && a.coeffs_ == b.coeffs_;
  }

 private:
  Coefficients coeffs_;
};

using Poly = Polynomial<double>;

/// Evaluates p at x. Throws InputDomain for non-finite x.
template <typename Scalar>
Scalar eval_poly(const Polynomial<Scalar>& p, Scalar x) {
  if (!std::isfinite(x)) {
    throw Error(ErrorKind::InputDomain, "polynomial argument must be finite");
  }
  return p(x);
}

/// Formal derivative; the derivative of a constant is the zero polynomial.
template <typename Scalar>
Polynomial<Scalar> derivative(const Polynomial<Scalar>& p) {
  const Eigen::Index d = p.degree();
  if (d == 0) return Polynomial<Scalar>{Scalar(0)};
  typename Polynomial<Scalar>::Coefficients out(d);
  for (Eigen::Index i = 1; i <= d; ++i) out(i - 1) = Scalar(i) * p[i];
  return Polynomial<Scalar>(std::move(out));
}

/// Rewrites q(t) with t = (x - shift) / scale as a polynomial in x.
template <typename Scalar>
Polynomial<Scalar> compose_affine(const Polynomial<Scalar>& q, Scalar shift, Scalar scale) {
  // Horner in the polynomial ring: acc <- acc * ((x - shift) / scale) + q_k.
  const Eigen::Index d = q.degree();
  using Vec = typename Polynomial<Scalar>::Coefficients;
  Vec acc = Vec::Zero(d + 1);
  acc(0) = q[d];
  const Scalar a1 = Scalar(1) / scale;
  const Scalar a0 = -shift / scale;
  for (Eigen::Index k = d - 1; k >= 0; --k) {
    Vec next = Vec::Zero(d + 1);
    for (Eigen::Index i = 0; i < d; ++i) {
      next(i) += acc(i) * a0;
      next(i + 1) += acc(i) * a1;
    }
    next(0) += q[k];
    acc = std::move(next);
  }
  return Polynomial<Scalar>(std::move(acc));
}

}  // namespace liftscore
