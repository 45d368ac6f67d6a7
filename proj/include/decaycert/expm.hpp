#pragma once

#include <array>
#include <cmath>

#include "decaycert/linalg.hpp"

namespace decaycert {

namespace detail {

inline Matrix pade_odd_even(const Matrix& a, const double* b, int degree, Matrix& v_out) {
  // Returns U (odd part) and writes V (even part) for Padé degree 3, 5, 7 or 9.
  const Eigen::Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix power = ident;
  Matrix u_sum = b[1] * ident;
  Matrix v_sum = b[0] * ident;
  for (int j = 2; j <= degree; j += 2) {
    power = power * a2;
    u_sum += b[j + 1] * power;
    v_sum += b[j] * power;
  }
  v_out = v_sum;
  return a * u_sum;
}

}  // namespace detail

/// Matrix exponential by Padé scaling and squaring (Higham 2005 degree selection).
inline Matrix expm(const Matrix& a) {
  static constexpr std::array<double, 4> b3{120.0, 60.0, 12.0, 1.0};
  static constexpr std::array<double, 6> b5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static constexpr std::array<double, 8> b7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                            25200.0,    1512.0,    56.0,      1.0};
  static constexpr std::array<double, 10> b9{17643225600.0, 8821612800.0, 2075673600.0,
                                             302702400.0,   30270240.0,   2162160.0,
                                             110880.0,      3960.0,       90.0,
                                             1.0};
  static constexpr std::array<double, 14> b13{
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  static constexpr std::array<double, 4> theta{1.495585217958292e-2, 2.539398330063230e-1,
                                               9.504178996162932e-1, 2.097847961257068};
  static constexpr double theta13 = 5.371920351148152;

  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  const Matrix ident = Matrix::Identity(n, n);
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();

  const std::array<const double*, 4> low{b3.data(), b5.data(), b7.data(), b9.data()};
  for (int i = 0; i < 4; ++i) {
    if (norm1 <= theta[i]) {
      Matrix v;
      const Matrix u = detail::pade_odd_even(a, low[i], 2 * i + 3, v);
      return (v - u).partialPivLu().solve(v + u);
    }
  }

  int squarings = 0;
  if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const Matrix s = a / std::ldexp(1.0, squarings);
  const Matrix s2 = s * s;
  const Matrix s4 = s2 * s2;
  const Matrix s6 = s4 * s2;
  const double* b = b13.data();
  const Matrix u = s * (s6 * (b[13] * s6 + b[11] * s4 + b[9] * s2) + b[7] * s6 + b[5] * s4 +
                        b[3] * s2 + b[1] * ident);
  const Matrix v = s6 * (b[12] * s6 + b[10] * s4 + b[8] * s2) + b[6] * s6 + b[4] * s4 +
                   b[2] * s2 + b[0] * ident;
  Matrix result = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

/// Evaluates e^{tG} for a fixed generator G. Diagonalizable generators with a
/// well-conditioned eigenbasis go through V e^{tΛ} V⁻¹; everything else falls
/// back to scaling and squaring at each requested time.
class Propagator {
 public:
  static constexpr double kConditionLimit = 1e8;

  explicit Propagator(Matrix generator, double condition_limit = kConditionLimit)
      : generator_(std::move(generator)) {
    Eigen::ComplexEigenSolver<Matrix> solver(generator_);
    if (solver.info() != Eigen::Success)
      throw Error(ErrorKind::EigensolverFailure, "eigensolver did not converge");
    eigenvectors_ = solver.eigenvectors();
    eigenvalues_ = solver.eigenvalues();
    condition_ = condition_number(eigenvectors_);
    diagonal_route_ = condition_ <= condition_limit;
    if (diagonal_route_) inverse_ = eigenvectors_.partialPivLu().inverse();
  }

  bool diagonal_route() const { return diagonal_route_; }
  double eigenbasis_condition() const { return condition_; }
  const Matrix& generator() const { return generator_; }

  Matrix exp(double t) const {
    if (!diagonal_route_) return expm(t * generator_);
    const Vector scale = (t * eigenvalues_).array().exp();
    return eigenvectors_ * scale.asDiagonal() * inverse_;
  }

  Vector apply(double t, const Vector& x) const {
    if (!diagonal_route_) return expm(t * generator_) * x;
    const Vector coeff = inverse_ * x;
    const Vector scaled = (t * eigenvalues_).array().exp() * coeff.array();
    return eigenvectors_ * scaled;
  }

 private:
  Matrix generator_;
  Matrix eigenvectors_;
  Vector eigenvalues_;
  Matrix inverse_;
  double condition_ = 0.0;
  bool diagonal_route_ = false;
};

}  // namespace decaycert
