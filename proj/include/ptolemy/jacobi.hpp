#pragma once

#include <array>

#include "ptolemy/ratio.hpp"

namespace ptolemy {

/// Eigenvalues of a symmetric 4x4 matrix by the cyclic Jacobi method,
/// ascending. Sweeps until the off-diagonal norm drops below tol times the
/// largest initial entry magnitude.
std::array<double, 4> symmetric_eigenvalues(const Matrix4& m, double tol = 1e-13);

}  // namespace ptolemy
