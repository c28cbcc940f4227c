#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace nsclab {

/// exp(A) by scaling and squaring with the [13/13] Pade approximant; the
/// number of squarings comes from the 1-norm bound of Higham (2005).
template <typename Derived>
typename Derived::PlainObject expm(const Eigen::MatrixBase<Derived>& A_in) {
  using Matrix = typename Derived::PlainObject;
  using Scalar = typename Derived::Scalar;
  constexpr double theta13 = 5.371920351148152;
  static constexpr double b[] = {64764752532480000.0,
                                 32382376266240000.0,
                                 7771770303897600.0,
                                 1187353796428800.0,
                                 129060195264000.0,
                                 10559470521600.0,
                                 670442572800.0,
                                 33522128640.0,
                                 1323241920.0,
                                 40840800.0,
                                 960960.0,
                                 16380.0,
                                 182.0,
                                 1.0};

  const Matrix& A0 = A_in.derived();
  const double norm1 = A0.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
  const Matrix A = A0 / Scalar(std::ldexp(1.0, squarings));

  const auto n = A.rows();
  const Matrix Id = Matrix::Identity(n, n);
  const Matrix A2 = A * A;
  const Matrix A4 = A2 * A2;
  const Matrix A6 = A4 * A2;
  Matrix U = A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2);
  U += b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * Id;
  U = A * U;
  Matrix V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2);
  V += b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * Id;

  Matrix X = (V - U).partialPivLu().solve(V + U);
  for (int i = 0; i < squarings; ++i) X = X * X;
  return X;
}

}  // namespace nsclab
