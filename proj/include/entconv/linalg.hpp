#pragma once

// Dense hermitian matrices on a bipartite cut C^{n1} (x) C^{n2}, together with
// the handful of spectral operations everything else is built from.

#include <entconv/errors.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

namespace entconv {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Relative eigenvalue threshold used for every rank decision.
inline constexpr double kRankRelTol = 1e-9;

struct Dims {
  Index n1 = 1;
  Index n2 = 1;

  [[nodiscard]] constexpr Index order() const { return n1 * n2; }
  friend constexpr bool operator==(const Dims &, const Dims &) = default;
};

inline std::string to_string(const Dims &d) {
  return std::to_string(d.n1) + "x" + std::to_string(d.n2);
}

class HermitianMatrix {
public:
  HermitianMatrix() = default;

  /// Symmetrizes `m`. Inputs further than 1e-8 (relative) from hermitian are
  /// rejected rather than silently projected.
  HermitianMatrix(Dims dims, ComplexMatrix m) : dims_(dims) {
    if (dims.n1 < 1 || dims.n2 < 1)
      throw Error(ErrorKind::InvalidArgument, "subsystem dimensions must be positive");
    if (m.rows() != m.cols() || m.rows() != dims.order())
      throw Error(ErrorKind::DimensionMismatch,
                  "matrix of size " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()) + " does not match dims " +
                      to_string(dims));
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (!(asym <= 1e-8 * scale))
      throw Error(ErrorKind::NotHermitian,
                  "asymmetry " + std::to_string(asym) + " exceeds tolerance");
    m_ = (m + m.adjoint()) * 0.5;
  }

  explicit HermitianMatrix(const ComplexMatrix &m) : HermitianMatrix(Dims{m.rows(), 1}, m) {}

  static HermitianMatrix identity(Dims d) {
    return {d, ComplexMatrix::Identity(d.order(), d.order())};
  }
  static HermitianMatrix zero(Dims d) {
    return {d, ComplexMatrix::Zero(d.order(), d.order())};
  }
  /// |v><v| (v is used as given, not normalized).
  static HermitianMatrix outer(Dims d, const ComplexVector &v) {
    return {d, v * v.adjoint()};
  }
  static HermitianMatrix diagonal(Dims d, const RealVector &diag) {
    return {d, diag.cast<Complex>().asDiagonal().toDenseMatrix()};
  }

  [[nodiscard]] const Dims &dims() const { return dims_; }
  [[nodiscard]] Index order() const { return m_.rows(); }
  [[nodiscard]] const ComplexMatrix &mat() const { return m_; }
  [[nodiscard]] Complex operator()(Index i, Index j) const { return m_(i, j); }
  [[nodiscard]] double trace() const { return m_.trace().real(); }

  HermitianMatrix &operator+=(const HermitianMatrix &o) {
    check_same(o);
    m_ += o.m_;
    return *this;
  }
  HermitianMatrix &operator-=(const HermitianMatrix &o) {
    check_same(o);
    m_ -= o.m_;
    return *this;
  }
  HermitianMatrix &operator*=(double s) {
    m_ *= s;
    return *this;
  }
  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix &b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix &b) { return a -= b; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend HermitianMatrix operator/(HermitianMatrix a, double s) { return a *= 1.0 / s; }
  friend HermitianMatrix operator-(HermitianMatrix a) { return a *= -1.0; }

  void check_same(const HermitianMatrix &o) const {
    if (o.order() != order() || !(o.dims_ == dims_))
      throw Error(ErrorKind::DimensionMismatch,
                  to_string(dims_) + " vs " + to_string(o.dims_));
  }

private:
  Dims dims_{};
  ComplexMatrix m_;
};

/// (1-t) a + t b
inline HermitianMatrix lerp(const HermitianMatrix &a, const HermitianMatrix &b, double t) {
  return (1.0 - t) * a + t * b;
}

inline double frobenius_distance(const HermitianMatrix &a, const HermitianMatrix &b) {
  a.check_same(b);
  return (a.mat() - b.mat()).norm();
}

struct SpectralDecomposition {
  Dims dims;
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // columns

  [[nodiscard]] Index size() const { return eigenvalues.size(); }
  [[nodiscard]] double max_abs() const {
    return size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  }
  /// Eigenvalues at or below this are treated as zero.
  [[nodiscard]] double zero_threshold(double rel = kRankRelTol) const {
    return rel * max_abs();
  }
  [[nodiscard]] ComplexVector vector(Index i) const { return eigenvectors.col(i); }

  /// V f(Λ) V†
  template <class F>
  [[nodiscard]] HermitianMatrix apply(F &&f) const {
    RealVector mapped(size());
    for (Index i = 0; i < size(); ++i)
      mapped(i) = f(eigenvalues(i));
    return {dims, eigenvectors * mapped.cast<Complex>().asDiagonal() *
                      eigenvectors.adjoint()};
  }
  [[nodiscard]] HermitianMatrix reconstruct() const {
    return apply([](double x) { return x; });
  }
};

/// Ascending eigenvalues; each eigenvector's largest-magnitude entry is made
/// real positive (lowest index wins ties) so certificates are reproducible.
inline SpectralDecomposition spectral_decompose(const HermitianMatrix &a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.mat());
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::DecompositionFailure, "eigensolver did not converge");
  SpectralDecomposition out{a.dims(), solver.eigenvalues(), solver.eigenvectors()};
  for (Index c = 0; c < out.eigenvectors.cols(); ++c) {
    auto col = out.eigenvectors.col(c);
    Index best = 0;
    double best_abs = std::abs(col(0));
    for (Index r = 1; r < col.size(); ++r) {
      const double v = std::abs(col(r));
      if (v > best_abs * (1.0 + 1e-12) + 1e-300) {
        best = r;
        best_abs = v;
      }
    }
    if (best_abs > 0)
      col *= std::conj(col(best)) / best_abs;
  }
  return out;
}

inline double min_eigenvalue(const HermitianMatrix &a) {
  return spectral_decompose(a).eigenvalues(0);
}
inline double max_eigenvalue(const HermitianMatrix &a) {
  const auto sd = spectral_decompose(a);
  return sd.eigenvalues(sd.size() - 1);
}

/// Transpose on the second tensor factor: ((i,k),(j,l)) -> ((i,l),(j,k)).
inline HermitianMatrix partial_transpose(const HermitianMatrix &a) {
  const Index n1 = a.dims().n1, n2 = a.dims().n2;
  ComplexMatrix out(a.order(), a.order());
  for (Index i = 0; i < n1; ++i)
    for (Index k = 0; k < n2; ++k)
      for (Index j = 0; j < n1; ++j)
        for (Index l = 0; l < n2; ++l)
          out(i * n2 + l, j * n2 + k) = a(i * n2 + k, j * n2 + l);
  return {a.dims(), std::move(out)};
}

/// Tr[A† B]
inline double trace_inner_product(const HermitianMatrix &a, const HermitianMatrix &b) {
  if (a.order() != b.order())
    throw Error(ErrorKind::DimensionMismatch, "trace inner product of different orders");
  return (a.mat().conjugate().cwiseProduct(b.mat())).sum().real();
}

inline double trace_norm(const HermitianMatrix &a) {
  return spectral_decompose(a).eigenvalues.cwiseAbs().sum();
}

/// Largest absolute eigenvalue.
inline double operator_norm(const HermitianMatrix &a) {
  return spectral_decompose(a).max_abs();
}

/// Projector onto eigenvectors with eigenvalue above `tol`; a negative `tol`
/// selects the default relative threshold.
inline HermitianMatrix support_projector(const SpectralDecomposition &sd, double tol = -1.0) {
  const double thr = tol < 0 ? sd.zero_threshold() : tol;
  return sd.apply([thr](double x) { return x > thr ? 1.0 : 0.0; });
}
inline HermitianMatrix support_projector(const HermitianMatrix &a, double tol = -1.0) {
  return support_projector(spectral_decompose(a), tol);
}

/// Projector onto eigenvectors with |eigenvalue| at or below `tol`.
inline HermitianMatrix kernel_projector(const SpectralDecomposition &sd, double tol = -1.0) {
  const double thr = tol < 0 ? sd.zero_threshold() : tol;
  return sd.apply([thr](double x) { return std::abs(x) <= thr ? 1.0 : 0.0; });
}

/// Orthonormal basis (columns) of the eigenspace with |eigenvalue| <= tol.
inline ComplexMatrix kernel_basis(const SpectralDecomposition &sd, double tol = -1.0) {
  const double thr = tol < 0 ? sd.zero_threshold() : tol;
  Index count = 0;
  for (Index i = 0; i < sd.size(); ++i)
    count += std::abs(sd.eigenvalues(i)) <= thr;
  ComplexMatrix out(sd.size(), count);
  Index c = 0;
  for (Index i = 0; i < sd.size(); ++i)
    if (std::abs(sd.eigenvalues(i)) <= thr)
      out.col(c++) = sd.eigenvectors.col(i);
  return out;
}

inline bool is_psd(const HermitianMatrix &a, double tol = 1e-10) {
  return min_eigenvalue(a) >= -tol;
}

inline bool is_state(const HermitianMatrix &a, double tol = 1e-9) {
  return std::abs(a.trace() - 1.0) <= tol && is_psd(a, tol);
}

inline void require_state(const HermitianMatrix &a, const char *what, double tol = 1e-9) {
  if (!is_state(a, tol))
    throw Error(ErrorKind::NotAState, std::string(what) + " must be unit-trace PSD");
}

/// ‖[A,B]‖_F
inline double commutator_norm(const HermitianMatrix &a, const HermitianMatrix &b) {
  a.check_same(b);
  return (a.mat() * b.mat() - b.mat() * a.mat()).norm();
}

/// Projection of a hermitian matrix onto the PSD cone (eigenvalue clipping).
inline HermitianMatrix psd_part(const HermitianMatrix &a) {
  return spectral_decompose(a).apply([](double x) { return std::max(x, 0.0); });
}

} // namespace entconv
