#include "ltidetect/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ltidetect::numerics {

namespace {

void check_square(const Matrix& A, const char* name) {
  require(A.rows() > 0 && A.rows() == A.cols(), ErrorCode::InvalidArgument,
          std::string(name) + " must be square and nonempty");
  require(A.allFinite(), ErrorCode::InvalidArgument,
          std::string(name) + " has non-finite entries");
}

Matrix symmetrized(const Matrix& A) { return 0.5 * (A + A.transpose()); }

}  // namespace

double operator_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  return A.jacobiSvd().singularValues()(0);
}

double spectral_radius(const Matrix& A) {
  check_square(A, "A");
  return A.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix dare_solve(const Matrix& F, const Matrix& C, const Matrix& R1,
                  const Matrix& R2, double tol, long maxIter) {
  check_square(F, "F");
  check_square(R1, "R1");
  check_square(R2, "R2");
  const auto n = F.rows();
  const auto m = C.rows();
  require(C.cols() == n && R1.rows() == n && R2.rows() == m,
          ErrorCode::InvalidArgument, "dare_solve: inconsistent dimensions");
  require(tol > 0 && maxIter > 0, ErrorCode::InvalidArgument,
          "dare_solve: tol and maxIter must be positive");

  Matrix P = symmetrized(R1);
  for (long iter = 0; iter < maxIter; ++iter) {
    const Matrix CP = C * P;
    const Matrix innovation = symmetrized(R2 + CP * C.transpose());
    Eigen::LDLT<Matrix> ldlt(innovation);
    const double dmax = ldlt.vectorD().cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(dmax > 0.0) ||
        ldlt.vectorD().minCoeff() <= dmax * 1e-14) {
      raise(ErrorCode::SingularMatrix,
            "dare_solve: innovation covariance R2 + C P C' is numerically singular");
    }
    const Matrix PF = P * F.transpose();
    const Matrix next =
        symmetrized(F * PF + R1 - (C * PF).transpose() * ldlt.solve(C * PF));
    const double residual = (next - P).cwiseAbs().maxCoeff();
    P = next;
    if (residual <= tol) return P;
  }
  raise(ErrorCode::NoConvergence,
        "dare_solve: residual above tol after max iterations");
}

Matrix symmetric_sqrt(const Matrix& S) {
  check_square(S, "S");
  require((S - S.transpose()).cwiseAbs().maxCoeff() <=
              1e-9 * std::max(1.0, S.cwiseAbs().maxCoeff()),
          ErrorCode::InvalidArgument, "symmetric_sqrt: S is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(S));
  require(eig.info() == Eigen::Success, ErrorCode::NoConvergence,
          "symmetric_sqrt: eigendecomposition failed");
  const double lmax = eig.eigenvalues().maxCoeff();
  const double floor = 1e-12 * std::max(1.0, lmax);
  require(eig.eigenvalues().minCoeff() > floor, ErrorCode::NotPositiveDefinite,
          "symmetric_sqrt: S is not positive definite");
  const Matrix root = eig.eigenvectors() *
                      eig.eigenvalues().cwiseSqrt().asDiagonal() *
                      eig.eigenvectors().transpose();
  return symmetrized(root);
}

namespace {

// Series expansion of P(a, x), valid and fast for x < a + 1.
double lower_gamma_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * std::numeric_limits<double>::epsilon())
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  raise(ErrorCode::NoConvergence, "regularized_lower_gamma: series did not converge");
}

// Modified Lentz evaluation of the continued fraction for Q(a, x) = 1 - P(a, x),
// preferred for x >= a + 1.
double upper_gamma_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() /
                          std::numeric_limits<double>::epsilon();
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) <= std::numeric_limits<double>::epsilon())
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
  }
  raise(ErrorCode::NoConvergence,
        "regularized_lower_gamma: continued fraction did not converge");
}

}  // namespace

double regularized_lower_gamma(double a, double x) {
  require(std::isfinite(a) && a > 0.0, ErrorCode::DomainError,
          "regularized_lower_gamma: requires a > 0");
  require(std::isfinite(x) && x >= 0.0, ErrorCode::DomainError,
          "regularized_lower_gamma: requires x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return lower_gamma_series(a, x);
  return 1.0 - upper_gamma_fraction(a, x);
}

double inverse_regularized_lower_gamma(double a, double p) {
  require(std::isfinite(a) && a > 0.0, ErrorCode::DomainError,
          "inverse_regularized_lower_gamma: requires a > 0");
  require(std::isfinite(p) && p >= 0.0 && p < 1.0, ErrorCode::DomainError,
          "inverse_regularized_lower_gamma: requires p in [0, 1)");
  if (p == 0.0) return 0.0;

  double lo = 0.0;
  double hi = a + 1.0;
  while (regularized_lower_gamma(a, hi) < p) {
    lo = hi;
    hi *= 2.0;
    require(hi < 1e300, ErrorCode::NoConvergence,
            "inverse_regularized_lower_gamma: bracket expansion failed");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (regularized_lower_gamma(a, mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

bool has_distinct_real_spectrum(const Eigen::VectorXcd& eigenvalues) {
  const auto n = eigenvalues.size();
  const double scale = std::max(1.0, eigenvalues.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(eigenvalues(i).imag()) > 0.0) return false;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(eigenvalues(i) - eigenvalues(j)) <= 1e-9 * scale) return false;
    }
  }
  return true;
}

ContractionNorm build_from_transform(const Matrix& F, const Matrix& T) {
  const Matrix Tinv = T.partialPivLu().solve(Matrix::Identity(T.rows(), T.cols()));
  ContractionNorm result;
  result.transform = T;
  result.starNorm = operator_norm(Tinv * F * T);
  result.conditionNumber = operator_norm(T) * operator_norm(Tinv);
  return result;
}

}  // namespace

ContractionNorm contraction_norm(const Matrix& F) {
  check_square(F, "F");
  const auto n = F.rows();
  Eigen::EigenSolver<Matrix> eig(F);
  require(eig.info() == Eigen::Success, ErrorCode::NoConvergence,
          "contraction_norm: eigendecomposition failed");
  const double rho = eig.eigenvalues().cwiseAbs().maxCoeff();
  require(rho < 1.0 - 1e-9, ErrorCode::SpectralRadiusNotContractive,
          "contraction_norm: spectral radius is not below one");

  if (has_distinct_real_spectrum(eig.eigenvalues())) {
    Matrix T = eig.eigenvectors().real();
    for (Eigen::Index j = 0; j < n; ++j) T.col(j).normalize();
    ContractionNorm result = build_from_transform(F, T);
    if (result.starNorm < 1.0 - 1e-12) return result;
  }

  // Scaled real Schur fallback: F = Q U Q'. Within each 2x2 block a diagonal
  // rescaling turns the block into a scaled rotation (2-norm equal to the
  // eigenvalue modulus); across blocks, powers of eps damp the strictly
  // upper-triangular coupling. eps is halved until the transformed norm
  // clears (1 + rho)/2.
  Eigen::RealSchur<Matrix> schur(F);
  require(schur.info() == Eigen::Success, ErrorCode::NoConvergence,
          "contraction_norm: Schur decomposition failed");
  const Matrix& U = schur.matrixT();

  Vector blockIndex(n);
  Vector withinScale = Vector::Ones(n);
  int block = 0;
  for (Eigen::Index i = 0; i < n;) {
    blockIndex(i) = block;
    if (i + 1 < n && U(i + 1, i) != 0.0) {
      blockIndex(i + 1) = block;
      const double b = U(i, i + 1);
      const double c = U(i + 1, i);
      if (b != 0.0) withinScale(i + 1) = std::sqrt(std::abs(c / b));
      i += 2;
    } else {
      i += 1;
    }
    ++block;
  }

  const double target = 0.5 * (1.0 + rho);
  double eps = 1.0;
  for (int attempt = 0; attempt < 120; ++attempt) {
    Vector diag(n);
    for (Eigen::Index i = 0; i < n; ++i)
      diag(i) = withinScale(i) * std::pow(eps, blockIndex(i));
    const Matrix T = schur.matrixU() * diag.asDiagonal();
    ContractionNorm result = build_from_transform(F, T);
    if (result.starNorm <= target) return result;
    eps *= 0.5;
  }
  raise(ErrorCode::NoConvergence,
        "contraction_norm: failed to construct a contractive similarity");
}

Vector top_right_singular_vector(const Matrix& A, long maxIter) {
  require(A.size() > 0 && A.allFinite(), ErrorCode::InvalidArgument,
          "top_right_singular_vector: A must be nonempty and finite");
  const auto n = A.cols();
  const Matrix B = A.transpose() * A;
  Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  if (B.cwiseAbs().maxCoeff() == 0.0) return v;  // A = 0: seed direction

  for (long iter = 0; iter < maxIter; ++iter) {
    Vector next = B * v;
    const double norm = next.norm();
    if (norm == 0.0) break;  // v in the null space; keep the seed direction
    next /= norm;
    const double delta = std::min((next - v).norm(), (next + v).norm());
    v = next;
    if (delta <= 1e-15) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(v(i)) > 1e-12) {
          if (v(i) < 0.0) v = -v;
          break;
        }
      }
      return v;
    }
  }
  raise(ErrorCode::NoConvergence,
        "top_right_singular_vector: power iteration did not converge");
}

Matrix covariance_factor(const Matrix& R) {
  check_square(R, "R");
  const double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
  require((R - R.transpose()).cwiseAbs().maxCoeff() <= 1e-9 * scale,
          ErrorCode::InvalidArgument, "covariance_factor: R is not symmetric");
  Eigen::LLT<Matrix> llt(symmetrized(R));
  if (llt.info() == Eigen::Success) return llt.matrixL();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(R));
  require(eig.info() == Eigen::Success, ErrorCode::NoConvergence,
          "covariance_factor: eigendecomposition failed");
  require(eig.eigenvalues().minCoeff() >= -1e-8 * scale,
          ErrorCode::NotPositiveDefinite,
          "covariance_factor: R has a negative eigenvalue");
  Vector lambda = eig.eigenvalues();
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    lambda(i) = lambda(i) < 1e-12 ? 0.0 : std::sqrt(lambda(i));
  return eig.eigenvectors() * lambda.asDiagonal();
}

}  // namespace ltidetect::numerics
