#include "krein/numerics.hpp"

#include "krein/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace krein {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::InconsistentAction: return "InconsistentAction";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotPositiveForm: return "NotPositiveForm";
    case ErrorKind::NoExtension: return "NoExtension";
    case ErrorKind::NotExtension: return "NotExtension";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::OracleMismatch: return "OracleMismatch";
    case ErrorKind::RangeIdentityViolated: return "RangeIdentityViolated";
    case ErrorKind::NotContraction: return "NotContraction";
    case ErrorKind::RouteMismatch: return "RouteMismatch";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::NotSolvable: return "NotSolvable";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MissingSection: return "MissingSection";
    case ErrorKind::BadShape: return "BadShape";
  }
  return "Unknown";
}

void ToleranceProfile::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!ok(rank_rel) || !ok(psd_slack) || !ok(residual)) {
    throw Error(ErrorKind::BadShape, "tolerances must be finite and strictly positive");
  }
}

namespace {

struct Svd {
  Matrix u;  // full
  Vector s;
  Matrix v;  // full
};

Svd full_svd(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

double cutoff(double sigma_max, const ToleranceProfile& tol, double scale) {
  return tol.rank_rel * std::max(sigma_max, scale);
}

Index count_above(const Vector& s, double cut) {
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut) ++r;
  }
  return r;
}

Eigen::SelfAdjointEigenSolver<Matrix> sym_eig(const Matrix& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(symmetrize(m));
}

}  // namespace

Subspace::Subspace(Index ambient_dim) : ambient_dim_(ambient_dim), basis_(ambient_dim, 0) {}

Subspace::Subspace(Index ambient_dim, Matrix orthonormal_basis)
    : ambient_dim_(ambient_dim), basis_(std::move(orthonormal_basis)) {
  if (basis_.rows() != ambient_dim_ || basis_.cols() > ambient_dim_) {
    throw Error(ErrorKind::ShapeMismatch, "subspace basis does not fit the ambient dimension");
  }
  const Index k = basis_.cols();
  if (k > 0 && (basis_.transpose() * basis_ - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-8) {
    throw Error(ErrorKind::ShapeMismatch, "subspace basis is not orthonormal");
  }
}

Subspace Subspace::full(Index ambient_dim) {
  return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::span(const Matrix& spanning, const ToleranceProfile& tol) {
  return range_of(spanning, tol);
}

Matrix Subspace::projector() const { return basis_ * basis_.transpose(); }

Subspace Subspace::orthogonal_complement() const {
  if (dim() == 0) return full(ambient_dim_);
  Eigen::HouseholderQR<Matrix> qr(basis_);
  Matrix q = qr.householderQ() * Matrix::Identity(ambient_dim_, ambient_dim_);
  return Subspace(ambient_dim_, q.rightCols(ambient_dim_ - dim()));
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw Error(ErrorKind::ShapeMismatch, std::string(what) + " has non-finite entries");
  }
}

Index rank_tol(const Matrix& m, const ToleranceProfile& tol, double scale) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  return count_above(s, cutoff(s(0), tol, scale));
}

Matrix pinv(const Matrix& m, const ToleranceProfile& tol, double scale) {
  Matrix out = Matrix::Zero(m.cols(), m.rows());
  if (m.size() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  if (s(0) == 0.0) return out;
  const Index r = count_above(s, cutoff(s(0), tol, scale));
  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();
  for (Index i = 0; i < r; ++i) {
    out += (v.col(i) / s(i)) * u.col(i).transpose();
  }
  return out;
}

Subspace range_of(const Matrix& m, const ToleranceProfile& tol, double scale) {
  const Index n = m.rows();
  if (m.size() == 0) return Subspace(n);
  Svd svd = full_svd(m);
  if (svd.s(0) == 0.0) return Subspace(n);
  const Index r = count_above(svd.s, cutoff(svd.s(0), tol, scale));
  return Subspace(n, svd.u.leftCols(r));
}

Subspace kernel_of(const Matrix& m, const ToleranceProfile& tol, double scale) {
  const Index n = m.cols();
  if (m.rows() == 0 || n == 0) return Subspace::full(n);
  Svd svd = full_svd(m);
  if (svd.s(0) == 0.0) return Subspace::full(n);
  const Index r = count_above(svd.s, cutoff(svd.s(0), tol, scale));
  return Subspace(n, svd.v.rightCols(n - r));
}

double min_eigenvalue(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return sym_eig(m).eigenvalues()(0);
}

double max_eigenvalue(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  auto eig = sym_eig(m);
  return eig.eigenvalues()(m.rows() - 1);
}

bool is_psd(const Matrix& m, const ToleranceProfile& tol) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::ShapeMismatch, "is_psd needs a square matrix");
  if (m.size() == 0) return true;
  return min_eigenvalue(m) >= -tol.psd_slack * std::max(spectral_norm(m), 1.0);
}

Matrix pinv_psd(const Matrix& m, const ToleranceProfile& tol, double scale) {
  if (!is_psd(m, tol)) throw Error(ErrorKind::NotPSD, "pseudoinverse of a non-PSD matrix");
  if (m.size() == 0) return m;
  auto eig = sym_eig(m);
  Vector lambda = eig.eigenvalues();
  const double top = std::max(lambda(lambda.size() - 1), 0.0);
  const double cut = cutoff(top, tol, scale);
  for (Index i = 0; i < lambda.size(); ++i) {
    lambda(i) = lambda(i) > cut ? 1.0 / lambda(i) : 0.0;
  }
  const Matrix& v = eig.eigenvectors();
  return symmetrize(v * lambda.asDiagonal() * v.transpose());
}

Matrix sqrt_psd(const Matrix& m, const ToleranceProfile& tol, double scale) {
  if (!is_psd(m, tol)) throw Error(ErrorKind::NotPSD, "square root of a non-PSD matrix");
  if (m.size() == 0) return m;
  auto eig = sym_eig(m);
  Vector lambda = eig.eigenvalues();
  const double top = std::max(lambda(lambda.size() - 1), 0.0);
  const double cut = cutoff(top, tol, scale);
  for (Index i = 0; i < lambda.size(); ++i) {
    lambda(i) = lambda(i) > cut ? std::sqrt(lambda(i)) : 0.0;
  }
  const Matrix& v = eig.eigenvectors();
  return symmetrize(v * lambda.asDiagonal() * v.transpose());
}

bool range_leq(const Matrix& x, const Matrix& y, const ToleranceProfile& tol, double scale) {
  if (x.rows() != y.rows()) throw Error(ErrorKind::ShapeMismatch, "range_leq row counts differ");
  if (x.size() == 0) return true;
  const Matrix p = range_of(y, tol, scale).projector();
  const Matrix outside = x - p * x;
  return spectral_norm(outside) <= tol.residual * std::max(spectral_norm(x), 1.0);
}

Subspace range_intersect(std::span<const Matrix> ms, const ToleranceProfile& tol, double scale) {
  if (ms.empty()) throw Error(ErrorKind::ShapeMismatch, "range_intersect needs at least one matrix");
  const Index n = ms.front().rows();
  Matrix distance = Matrix::Zero(n, n);
  for (const Matrix& m : ms) {
    if (m.rows() != n) throw Error(ErrorKind::ShapeMismatch, "range_intersect row counts differ");
    distance += Matrix::Identity(n, n) - range_of(m, tol, scale).projector();
  }
  if (n == 0) return Subspace(0);
  auto eig = sym_eig(distance);
  const Vector& lambda = eig.eigenvalues();
  Index r = 0;
  while (r < n && lambda(r) <= tol.residual) ++r;
  return Subspace(n, eig.eigenvectors().leftCols(r));
}

bool loewner_leq(const Matrix& a, const Matrix& b, const ToleranceProfile& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "loewner_leq shapes differ");
  }
  return is_psd(symmetrize(b - a), tol);
}

bool form_order_leq(const Matrix& a, const Matrix& b, const ToleranceProfile& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "form_order_leq shapes differ");
  }
  if (!is_psd(a, tol) || !is_psd(b, tol)) {
    throw Error(ErrorKind::NotPSD, "form order is defined for PSD operators");
  }
  const Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix ra = (id + symmetrize(a)).ldlt().solve(id);
  const Matrix rb = (id + symmetrize(b)).ldlt().solve(id);
  return is_psd(symmetrize(ra - rb), tol);
}

}  // namespace krein
