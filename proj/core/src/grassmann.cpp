#include "grasspca/grassmann.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

namespace grasspca {

namespace {

constexpr double kRankTolerance = 1e-10;

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidInputError(std::string(what) + ": non-finite entries");
  }
}

// First entry of magnitude > 1e-12 in each row is made nonnegative.
void apply_sign_convention(Matrix& rows) {
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      const double v = rows(i, j);
      if (std::abs(v) > 1e-12) {
        if (v < 0.0) rows.row(i) = -rows.row(i);
        break;
      }
    }
  }
}

// Re-orthonormalizes rows in place when they have drifted; span unchanged.
void tighten_orthonormality(Matrix& rows) {
  const Eigen::Index m = rows.rows();
  const double err = (rows * rows.transpose() - Matrix::Identity(m, m)).norm();
  if (err > 1e-9) {
    Eigen::HouseholderQR<Matrix> qr(rows.transpose());
    Matrix thin_q = qr.householderQ() * Matrix::Identity(rows.cols(), m);
    rows = thin_q.transpose();
    apply_sign_convention(rows);
  }
}

}  // namespace

SubspaceBasis::SubspaceBasis(Matrix basis) : rows_(std::move(basis)) {
  const Eigen::Index m = rows_.rows();
  const Eigen::Index n = rows_.cols();
  if (m < 1 || m >= n) {
    throw DimensionError("SubspaceBasis: need 1 <= M < N, got " +
                         std::to_string(m) + "x" + std::to_string(n));
  }
  require_finite(rows_, "SubspaceBasis");
  const double err =
      (rows_ * rows_.transpose() - Matrix::Identity(m, m)).norm();
  if (err >= 1e-8) {
    throw InvalidInputError("SubspaceBasis: rows not orthonormal, ||BB^T - I|| = " +
                            std::to_string(err));
  }
}

EigenspaceResult dominant_eigenspace(const Matrix& symmetric,
                                     int subspace_dim) {
  if (symmetric.rows() != symmetric.cols()) {
    throw InvalidInputError("dominant_eigenspace: matrix must be square");
  }
  require_finite(symmetric, "dominant_eigenspace");
  const int n = static_cast<int>(symmetric.rows());
  if (subspace_dim < 1 || subspace_dim >= n) {
    throw DimensionError("dominant_eigenspace: need 1 <= M < N, got M=" +
                         std::to_string(subspace_dim) +
                         ", N=" + std::to_string(n));
  }

  // Products like J^T J arrive with rounding asymmetry; symmetrize first.
  const Matrix sym = 0.5 * (symmetric + symmetric.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw DegenerateInputError("dominant_eigenspace: eigensolver failed", 0.0);
  }

  // Eigen sorts ascending; take the top block in descending order.
  const int m = subspace_dim;
  Matrix basis(m, n);
  Vector values(m);
  for (int i = 0; i < m; ++i) {
    basis.row(i) = eig.eigenvectors().col(n - 1 - i).transpose();
    values(i) = eig.eigenvalues()(n - 1 - i);
  }
  apply_sign_convention(basis);
  const double gap = values(m - 1) - eig.eigenvalues()(n - 1 - m);
  return EigenspaceResult{SubspaceBasis(std::move(basis)), std::move(values),
                          gap};
}

EigenspaceResult dominant_row_space(const Matrix& matrix, int subspace_dim) {
  require_finite(matrix, "dominant_row_space");
  const int rows = static_cast<int>(matrix.rows());
  const int cols = static_cast<int>(matrix.cols());
  if (subspace_dim < 1 || subspace_dim > rows || subspace_dim >= cols) {
    throw DimensionError("dominant_row_space: need 1 <= M <= rows and M < cols");
  }
  if (rows >= cols) {
    return dominant_eigenspace(matrix.transpose() * matrix, subspace_dim);
  }

  // Wide case: eigendecompose the small rows x rows Gram and map back,
  // which is the thin SVD of `matrix` without the cols x cols product.
  const Matrix gram = matrix * matrix.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 *
                                            (gram + gram.transpose()));
  if (eig.info() != Eigen::Success) {
    throw DegenerateInputError("dominant_row_space: eigensolver failed", 0.0);
  }
  const Vector& evals = eig.eigenvalues();  // ascending
  const double lead = std::max(evals(rows - 1), 0.0);
  // Deficient directions surface as eigenvalues at rounding scale
  // (~1e-16 * lead), well below this floor.
  const double floor = lead * 1e-12;
  const int m = subspace_dim;
  if (evals(rows - m) <= floor) {
    throw DegenerateInputError(
        "dominant_row_space: effective rank below requested dimension",
        std::sqrt(std::max(evals(rows - m), 0.0)));
  }

  Matrix basis(m, cols);
  Vector values(m);
  for (int i = 0; i < m; ++i) {
    const int idx = rows - 1 - i;
    const double lambda = evals(idx);
    basis.row(i) =
        (matrix.transpose() * eig.eigenvectors().col(idx)).transpose() /
        std::sqrt(lambda);
    values(i) = lambda;
  }
  apply_sign_convention(basis);
  tighten_orthonormality(basis);
  const double next = (m < rows) ? std::max(evals(rows - 1 - m), 0.0) : 0.0;
  const double gap = values(m - 1) - next;
  return EigenspaceResult{SubspaceBasis(std::move(basis)), std::move(values),
                          gap};
}

double subspace_distance_squared(const SubspaceBasis& a,
                                 const SubspaceBasis& b) {
  if (a.subspace_dim() != b.subspace_dim() ||
      a.ambient_dim() != b.ambient_dim()) {
    throw DimensionError("subspace_distance: shape mismatch");
  }
  // The projector difference is evaluated directly: the alternative
  // 2M - 2||AB^T||_F^2 cancels catastrophically for nearby subspaces.
  Matrix diff = b.matrix().transpose() * b.matrix();
  diff.noalias() -= a.matrix().transpose() * a.matrix();
  return diff.squaredNorm();
}

double subspace_distance(const SubspaceBasis& a, const SubspaceBasis& b) {
  return std::sqrt(subspace_distance_squared(a, b));
}

PrincipalAngles principal_angles(const SubspaceBasis& a,
                                 const SubspaceBasis& b) {
  if (a.subspace_dim() != b.subspace_dim() ||
      a.ambient_dim() != b.ambient_dim()) {
    throw DimensionError("principal_angles: shape mismatch");
  }
  const Matrix overlap = a.matrix() * b.matrix().transpose();
  Eigen::JacobiSVD<Matrix> svd(overlap);
  PrincipalAngles result;
  result.angles.reserve(a.subspace_dim());
  // Singular values descend, so arccos yields ascending angles; cosines
  // are clamped because rounding pushes them slightly past 1.
  for (int i = 0; i < a.subspace_dim(); ++i) {
    const double c = std::clamp(svd.singularValues()(i), 0.0, 1.0);
    result.angles.push_back(std::acos(c));
  }
  return result;
}

SubspaceBasis procrustes_project(const Matrix& matrix) {
  require_finite(matrix, "procrustes_project");
  if (matrix.rows() >= matrix.cols()) {
    throw DimensionError("procrustes_project: expected a wide M x N matrix");
  }
  Eigen::JacobiSVD<Matrix> svd(matrix,
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  if (smallest <= kRankTolerance * sv(0)) {
    throw DegenerateInputError("procrustes_project: rank-deficient input",
                               smallest);
  }
  return SubspaceBasis(svd.matrixU() * svd.matrixV().transpose());
}

SubspaceBasis orthogonal_complement(const SubspaceBasis& basis) {
  const int n = basis.ambient_dim();
  const int m = basis.subspace_dim();
  Eigen::HouseholderQR<Matrix> qr(basis.matrix().transpose());
  const Matrix full_q = qr.householderQ();
  Matrix complement = full_q.rightCols(n - m).transpose();
  apply_sign_convention(complement);
  return SubspaceBasis(std::move(complement));
}

Matrix gaussian_matrix(int rows, int cols, double variance, Rng& rng) {
  if (variance < 0.0) {
    throw InvalidInputError("gaussian_matrix: negative variance");
  }
  Matrix result(rows, cols);
  if (variance == 0.0) {
    result.setZero();
    return result;
  }
  const double scale = std::sqrt(variance);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      result(i, j) = scale * rng.next_gaussian();
    }
  }
  return result;
}

Matrix random_stiefel(int rows, int cols, Rng& rng) {
  if (rows < cols || cols < 1) {
    throw DimensionError("random_stiefel: need rows >= cols >= 1");
  }
  const Matrix g = gaussian_matrix(rows, cols, 1.0, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

SubspaceBasis random_subspace(int subspace_dim, int ambient_dim, Rng& rng) {
  if (subspace_dim >= ambient_dim) {
    throw DimensionError("random_subspace: need M < N");
  }
  return SubspaceBasis(
      random_stiefel(ambient_dim, subspace_dim, rng).transpose());
}

}  // namespace grasspca
