#pragma once

#include <Eigen/Dense>

#include "ltidetect/errors.hpp"

namespace ltidetect {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace numerics {

/// Similarity transform T with ||T^-1 F T||_2 < 1, packaged with the
/// constant c = kappa(T) so that ||F^k||_2 <= c * ||T^-1 F^k T||_2 holds
/// for every k >= 0.
struct ContractionNorm {
  Matrix transform;        // T
  double conditionNumber;  // c = ||T||_2 * ||T^-1||_2
  double starNorm;         // ||T^-1 F T||_2, strictly below one
};

/// Solves F P F' - P + R1 - F P C' (R2 + C P C')^-1 C P F' = 0 by the
/// fixed-point iteration P <- F P F' + R1 - F P C' (R2 + C P C')^-1 C P F'
/// started from P = R1. Converges for detectable (F, C); the iterate
/// difference equals the Riccati residual, so the returned P satisfies
/// residual <= tol in the max-abs norm.
Matrix dare_solve(const Matrix& F, const Matrix& C, const Matrix& R1,
                  const Matrix& R2, double tol = 1e-12, long maxIter = 1000000);

/// Symmetric M with M*M = S, via eigendecomposition. S must be symmetric
/// positive definite.
Matrix symmetric_sqrt(const Matrix& S);

/// Regularized lower incomplete gamma function P(a, x), a > 0, x >= 0.
/// Series expansion for x < a + 1, Lentz continued fraction otherwise.
double regularized_lower_gamma(double a, double x);

/// Inverse of P(a, .): returns x with P(a, x) = p for p in [0, 1), by
/// bracket expansion followed by bisection.
double inverse_regularized_lower_gamma(double a, double p);

/// Builds a contraction norm for F with spectral radius below one. When F
/// has distinct real eigenvalues, T is the eigenvector matrix and the star
/// norm equals the spectral radius; otherwise a scaled real Schur form is
/// used with off-diagonal damping chosen so the transformed 2-norm drops
/// below one.
ContractionNorm contraction_norm(const Matrix& F);

/// Unit right singular vector of the largest singular value of A, by power
/// iteration on A'A seeded with the normalized all-ones vector (which is
/// also the documented tie-break result for degenerate spectra). The sign
/// is fixed so the first entry of nonnegligible magnitude is positive.
Vector top_right_singular_vector(const Matrix& A, long maxIter = 100000);

/// Operator 2-norm (largest singular value).
double operator_norm(const Matrix& A);

/// Largest eigenvalue modulus.
double spectral_radius(const Matrix& A);

/// Factor A with A*A' = R for sampling from N(0, R). Uses the Cholesky
/// factor when R is positive definite and falls back to an eigenfactor for
/// semidefinite R, zeroing eigenvalues below 1e-12.
Matrix covariance_factor(const Matrix& R);

}  // namespace numerics
}  // namespace ltidetect
