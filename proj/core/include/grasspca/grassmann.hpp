#pragma once

#include <Eigen/Dense>
#include <vector>

#include "grasspca/errors.hpp"
#include "grasspca/rng.hpp"

namespace grasspca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A point on the Grassmannian G_{N,M}: an M-dimensional subspace of R^N,
/// represented by an M x N matrix with orthonormal rows (M < N).
///
/// The represented object is span of the rows; any two bases related by a
/// left orthonormal factor are the same point. subspace_distance() and
/// principal_angles() are blind to that factor.
class SubspaceBasis {
public:
  /// Validates row-orthonormality (Frobenius tolerance 1e-8) and M < N.
  explicit SubspaceBasis(Matrix basis);

  int subspace_dim() const { return static_cast<int>(rows_.rows()); }
  int ambient_dim() const { return static_cast<int>(rows_.cols()); }
  const Matrix& matrix() const { return rows_; }

private:
  Matrix rows_;
};

/// Principal angles between two equal-shape subspaces, ascending, in
/// [0, pi/2].
struct PrincipalAngles {
  std::vector<double> angles;
};

/// Dominant M-dimensional eigenspace of a symmetric PSD matrix, with its
/// eigenvalues (descending) and the gap lambda_M - lambda_{M+1} that
/// indicates how well-defined the extracted subspace is.
struct EigenspaceResult {
  SubspaceBasis basis;
  Vector eigenvalues;
  double spectral_gap = 0.0;
};

/// Top-M eigenvectors of a symmetric PSD matrix S, as rows of an
/// orthonormal basis. S is symmetrized as (S + S^T)/2 before
/// decomposition; eigenvector signs follow a fixed convention (first
/// entry of magnitude > 1e-12 is nonnegative) so results are
/// bit-deterministic for identical input.
EigenspaceResult dominant_eigenspace(const Matrix& symmetric, int subspace_dim);

/// Dominant row-space basis of a general R x N matrix Y: the top-M right
/// singular vectors of Y as rows. Mathematically identical to
/// dominant_eigenspace(Y^T Y, M) but never forms the N x N Gram matrix;
/// eigenvalues are the squared singular values.
///
/// Throws DegenerateInputError when Y has effective rank < M (squared
/// singular value below 1e-12 of the largest).
EigenspaceResult dominant_row_space(const Matrix& matrix, int subspace_dim);

/// Euclidean subspace distance d(A,B) = ||B^T B - A^T A||_F.
/// Range [0, sqrt(2M)]; invariant to left orthonormal factors on either
/// argument.
double subspace_distance(const SubspaceBasis& a, const SubspaceBasis& b);

/// Squared distance; cheaper to consume in Monte Carlo accumulations.
double subspace_distance_squared(const SubspaceBasis& a,
                                 const SubspaceBasis& b);

/// Principal angles theta_i = arccos(sigma_i(A B^T)), cosines clamped to
/// [0,1]. Satisfies d^2(A,B) = 2 sum_i sin^2 theta_i.
PrincipalAngles principal_angles(const SubspaceBasis& a,
                                 const SubspaceBasis& b);

/// Orthonormal polar factor U V^T of the thin SVD J = U L V^T; the
/// maximizer of Tr(X^T J) over row-orthonormal X, and a basis of the same
/// subspace as the dominant row space of J.
///
/// Throws DegenerateInputError (carrying the smallest singular value) when
/// J is rank-deficient relative to tolerance 1e-10.
SubspaceBasis procrustes_project(const Matrix& matrix);

/// (N-M) x N row-orthonormal basis of the orthogonal complement,
/// A complement^T = 0 within 1e-10. Deterministic for fixed input.
SubspaceBasis orthogonal_complement(const SubspaceBasis& basis);

/// Uniform draw on G_{N,M}: row space of an M x N i.i.d. Gaussian matrix.
SubspaceBasis random_subspace(int subspace_dim, int ambient_dim, Rng& rng);

/// rows x cols matrix with orthonormal columns (rows >= cols), isotropic.
Matrix random_stiefel(int rows, int cols, Rng& rng);

/// rows x cols matrix of i.i.d. N(0, variance) entries, drawn row-major.
Matrix gaussian_matrix(int rows, int cols, double variance, Rng& rng);

}  // namespace grasspca
