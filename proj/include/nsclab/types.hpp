#pragma once

#include <complex>

#include <Eigen/Dense>

namespace nsclab {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;

// Ordering of the eight unknowns: (n, w1, w2, w3, phi, psi1, psi2, psi3).
using Mat8 = Eigen::Matrix<cplx, 8, 8>;
using Vec8 = Eigen::Matrix<cplx, 8, 1>;

// Longitudinal block in the ordering (n, w.e, phi, psi.e), e = xi/|xi|.
using Mat4 = Eigen::Matrix<cplx, 4, 4>;
using Vec4 = Eigen::Matrix<cplx, 4, 1>;

inline constexpr cplx kI{0.0, 1.0};

}  // namespace nsclab
