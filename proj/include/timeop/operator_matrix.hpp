#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include "timeop/spectral.hpp"

namespace timeop {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using DiagVector = Eigen::VectorXd;
using Vector = Eigen::VectorXcd;

// ---------------------------------------------------------------------------
// M x M truncations (restriction to span{xi_0 .. xi_{M-1}}) of the operators
// used throughout.  Matrices are immutable after construction; Hermitian
// kinds are assembled symmetrically so entry(m,n) == conj(entry(n,m)) holds
// to the last bit.
// ---------------------------------------------------------------------------

enum class MatrixKind {
  DiagPower,       // diag f(n)^p
  ShiftLeft,       // xi_n -> xi_{n-k}
  ShiftRight,      // xi_n -> xi_{n+k} (adjoint shift)
  GapInverseDiag,  // diag 1/(f(n+k)-f(n))
  TimeOp,          // entries i/(f(m)-f(n))
  TimeOpPartial,   // banded partial sum of shift products
  Galapon,         // entries i/(E_m-E_n) from an explicit eigenvalue list
  TimeOpSquared,   // entries i/(f(m)^2-f(n)^2)
  Symmetrized,     // D T' + T' D + gamma diag(f^beta), D = diag f, T' = TimeOpSquared
  General,         // derived matrix (commutators etc.)
};

inline const char* to_string(MatrixKind k) {
  switch (k) {
    case MatrixKind::DiagPower: return "diag_power";
    case MatrixKind::ShiftLeft: return "shift_left";
    case MatrixKind::ShiftRight: return "shift_right";
    case MatrixKind::GapInverseDiag: return "gap_inverse_diag";
    case MatrixKind::TimeOp: return "time_op";
    case MatrixKind::TimeOpPartial: return "time_op_partial";
    case MatrixKind::Galapon: return "galapon";
    case MatrixKind::TimeOpSquared: return "time_op_squared";
    case MatrixKind::Symmetrized: return "symmetrized";
    case MatrixKind::General: return "general";
  }
  return "?";
}

class OperatorMatrix {
 public:
  static OperatorMatrix diagonal(MatrixKind kind, DiagVector d,
                                 std::string label) {
    OperatorMatrix a;
    a.kind_ = kind;
    a.dim_ = d.size();
    a.diag_ = std::move(d);
    a.diagonal_ = true;
    a.label_ = std::move(label);
    return a;
  }

  static OperatorMatrix dense(MatrixKind kind, DenseMatrix m,
                              std::string label) {
    if (m.rows() != m.cols())
      throw std::invalid_argument("OperatorMatrix: matrix must be square");
    OperatorMatrix a;
    a.kind_ = kind;
    a.dim_ = m.rows();
    a.dense_ = std::move(m);
    a.diagonal_ = false;
    a.label_ = std::move(label);
    return a;
  }

  Eigen::Index dim() const { return dim_; }
  MatrixKind kind() const { return kind_; }
  bool is_diagonal() const { return diagonal_; }
  const std::string& label() const { return label_; }

  Complex entry(Eigen::Index m, Eigen::Index n) const {
    if (diagonal_) return m == n ? Complex(diag_[m], 0.0) : Complex(0.0, 0.0);
    return dense_(m, n);
  }

  const DiagVector& diagonal_entries() const {
    if (!diagonal_)
      throw std::logic_error("diagonal_entries on a dense matrix");
    return diag_;
  }

  const DenseMatrix& dense_entries() const {
    if (diagonal_) throw std::logic_error("dense_entries on a diagonal matrix");
    return dense_;
  }

  DenseMatrix to_dense() const {
    if (!diagonal_) return dense_;
    DenseMatrix m = DenseMatrix::Zero(dim_, dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) m(i, i) = diag_[i];
    return m;
  }

  Vector apply(const Vector& v) const {
    if (v.size() != dim_)
      throw std::invalid_argument("apply: dimension mismatch");
    if (diagonal_) return diag_.cast<Complex>().cwiseProduct(v);
    return dense_ * v;
  }

 private:
  OperatorMatrix() = default;

  MatrixKind kind_ = MatrixKind::General;
  Eigen::Index dim_ = 0;
  bool diagonal_ = true;
  DiagVector diag_;
  DenseMatrix dense_;
  std::string label_;
};

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// diag(f(n)^p), n = 0..M-1.  p may be negative.
inline OperatorMatrix diag_power(const SpectralFunction& f, Eigen::Index M,
                                 double p) {
  if (M < 1) throw std::invalid_argument("diag_power: M must be >= 1");
  DiagVector d(M);
  for (Eigen::Index n = 0; n < M; ++n)
    d[n] = p == 1.0 ? f(static_cast<std::size_t>(n))
                    : std::pow(f(static_cast<std::size_t>(n)), p);
  std::string label = "diag(" + f.label() + ")";
  if (p != 1.0) label += "^" + detail::format_double(p);
  return OperatorMatrix::diagonal(MatrixKind::DiagPower, std::move(d), label);
}

/// k-fold shift truncation.  adjoint=false: xi_n -> xi_{n-k} (zero for n<k);
/// adjoint=true: xi_n -> xi_{n+k}, overflow past the truncation dropped.
inline OperatorMatrix shift_matrix(Eigen::Index M, Eigen::Index k,
                                   bool adjoint) {
  if (k < 1 || k >= M)
    throw std::invalid_argument("shift_matrix: need 1 <= k < M");
  DenseMatrix m = DenseMatrix::Zero(M, M);
  for (Eigen::Index n = k; n < M; ++n) {
    if (adjoint)
      m(n, n - k) = 1.0;  // column n-k maps to row n
    else
      m(n - k, n) = 1.0;
  }
  return OperatorMatrix::dense(adjoint ? MatrixKind::ShiftRight
                                       : MatrixKind::ShiftLeft,
                               std::move(m),
                               (adjoint ? "shift_right^" : "shift_left^") +
                                   std::to_string(k));
}

/// diag(1/(f(n+k)-f(n))), n = 0..M-1.  Needs f evaluable up to M-1+k.
inline OperatorMatrix gap_inverse_diag(const SpectralFunction& f,
                                       Eigen::Index M, Eigen::Index k) {
  if (M < 1 || k < 1)
    throw std::invalid_argument("gap_inverse_diag: need M >= 1, k >= 1");
  DiagVector d(M);
  for (Eigen::Index n = 0; n < M; ++n) {
    const double g = gap(f, static_cast<std::size_t>(k),
                         static_cast<std::size_t>(n));
    if (!(g > 0.0))
      throw std::invalid_argument("gap_inverse_diag: non-positive gap at n = " +
                                  std::to_string(n));
    d[n] = 1.0 / g;
  }
  return OperatorMatrix::diagonal(MatrixKind::GapInverseDiag, std::move(d),
                                  "gap_inv_" + std::to_string(k) + "(" +
                                      f.label() + ")");
}

namespace detail {

// Require f strictly increasing on 0..M-1 (tabulated data can violate it;
// the entries would divide by zero or flip sign).
inline void require_strictly_increasing(const SpectralFunction& f,
                                        Eigen::Index M) {
  double prev = f(0);
  for (Eigen::Index n = 1; n < M; ++n) {
    const double cur = f(static_cast<std::size_t>(n));
    if (!(cur > prev))
      throw std::invalid_argument(
          "spectrum not strictly increasing at n = " + std::to_string(n - 1));
    prev = cur;
  }
}

// Hermitian fill from a generator of the strictly-lower-triangle entries.
template <typename Gen>
DenseMatrix hermitian_from_lower(Eigen::Index M, Gen&& lower_entry) {
  DenseMatrix m(M, M);
  for (Eigen::Index r = 0; r < M; ++r) {
    m(r, r) = Complex(0.0, 0.0);
    for (Eigen::Index c = 0; c < r; ++c) {
      const Complex z = lower_entry(r, c);
      m(r, c) = z;
      m(c, r) = std::conj(z);
    }
  }
  return m;
}

}  // namespace detail

/// Time-operator truncation: entry(m,n) = i/(f(m)-f(n)), zero diagonal.
inline OperatorMatrix time_operator(const SpectralFunction& f,
                                    Eigen::Index M) {
  if (M < 2) throw std::invalid_argument("time_operator: M must be >= 2");
  detail::require_strictly_increasing(f, M);
  auto m = detail::hermitian_from_lower(M, [&](Eigen::Index r, Eigen::Index c) {
    return Complex(0.0, 1.0 / gap(f, static_cast<std::size_t>(r - c),
                                  static_cast<std::size_t>(c)));
  });
  return OperatorMatrix::dense(MatrixKind::TimeOp, std::move(m),
                               "T(" + f.label() + ")");
}

/// Same for the squared spectrum: entry(m,n) = i/(f(m)^2-f(n)^2).
/// The gap is computed factored, (f(m)-f(n))(f(m)+f(n)), which keeps the
/// difference cancellation-safe for free.
inline OperatorMatrix time_operator_squared(const SpectralFunction& f,
                                            Eigen::Index M) {
  if (M < 2)
    throw std::invalid_argument("time_operator_squared: M must be >= 2");
  detail::require_strictly_increasing(f, M);
  auto m = detail::hermitian_from_lower(M, [&](Eigen::Index r, Eigen::Index c) {
    const double g = gap(f, static_cast<std::size_t>(r - c),
                         static_cast<std::size_t>(c));
    const double s = f(static_cast<std::size_t>(r)) +
                     f(static_cast<std::size_t>(c));
    return Complex(0.0, 1.0 / (g * s));
  });
  return OperatorMatrix::dense(MatrixKind::TimeOpSquared, std::move(m),
                               "T(" + f.label() + "^2)");
}

/// Literal banded partial sum
///   i * sum_{k=1}^{m_cut} (S_k^adj D_k^-1 - D_k^-1 S_k)
/// assembled from shift and gap-inverse truncations by actual matrix
/// products.  Kept as the independent route validating time_operator's
/// closed form on the band |m-n| <= m_cut.
inline OperatorMatrix time_operator_partial(const SpectralFunction& f,
                                            Eigen::Index M,
                                            Eigen::Index m_cut) {
  if (M < 2)
    throw std::invalid_argument("time_operator_partial: M must be >= 2");
  if (m_cut < 1)
    throw std::invalid_argument("time_operator_partial: m_cut must be >= 1");
  detail::require_strictly_increasing(f, M);
  DenseMatrix acc = DenseMatrix::Zero(M, M);
  const Eigen::Index kmax = std::min(m_cut, M - 1);
  for (Eigen::Index k = 1; k <= kmax; ++k) {
    const DenseMatrix up = shift_matrix(M, k, true).to_dense();
    const DenseMatrix down = shift_matrix(M, k, false).to_dense();
    const DenseMatrix ginv = gap_inverse_diag(f, M, k).to_dense();
    acc += up * ginv - ginv * down;
  }
  DenseMatrix m = Complex(0.0, 1.0) * acc;
  return OperatorMatrix::dense(MatrixKind::TimeOpPartial, std::move(m),
                               "T_m(" + f.label() + ",cut=" +
                                   std::to_string(m_cut) + ")");
}

/// Galapon matrix from an explicit eigenvalue list:
/// entry(m,n) = i/(E_m - E_n), zero diagonal.
inline OperatorMatrix galapon_matrix(std::span<const double> eigenvalues,
                                     Eigen::Index M) {
  if (M < 2) throw std::invalid_argument("galapon_matrix: M must be >= 2");
  if (std::cmp_less(eigenvalues.size(), M))
    throw std::invalid_argument("galapon_matrix: eigenvalue list shorter than M");
  for (Eigen::Index n = 1; n < M; ++n)
    if (!(eigenvalues[n] > eigenvalues[n - 1]))
      throw std::invalid_argument(
          "galapon_matrix: eigenvalues not strictly increasing at n = " +
          std::to_string(n));
  auto m = detail::hermitian_from_lower(M, [&](Eigen::Index r, Eigen::Index c) {
    return Complex(0.0, 1.0 / (eigenvalues[r] - eigenvalues[c]));
  });
  return OperatorMatrix::dense(MatrixKind::Galapon, std::move(m), "galapon");
}

/// D T' + T' D + gamma diag(f^beta) with D = diag(f) and T' the squared-
/// spectrum time operator.  D is diagonal, so this equals the truncation of
/// the infinite operator exactly; off the diagonal the entry is
/// (f(m)+f(n)) * T'(m,n).
inline OperatorMatrix symmetrized_time_op(const SpectralFunction& f,
                                          Eigen::Index M, double gamma,
                                          double beta) {
  if (M < 2)
    throw std::invalid_argument("symmetrized_time_op: M must be >= 2");
  detail::require_strictly_increasing(f, M);
  DenseMatrix m(M, M);
  for (Eigen::Index r = 0; r < M; ++r) {
    const double fr = f(static_cast<std::size_t>(r));
    m(r, r) = Complex(gamma == 0.0 ? 0.0 : gamma * std::pow(fr, beta), 0.0);
    for (Eigen::Index c = 0; c < r; ++c) {
      const double fc = f(static_cast<std::size_t>(c));
      const double g = gap(f, static_cast<std::size_t>(r - c),
                           static_cast<std::size_t>(c));
      const double sum = fr + fc;
      const Complex t2(0.0, 1.0 / (g * sum));
      const Complex z = sum * t2;
      m(r, c) = z;
      m(c, r) = std::conj(z);
    }
  }
  return OperatorMatrix::dense(
      MatrixKind::Symmetrized, std::move(m),
      "sym(" + f.label() + ",gamma=" + detail::format_double(gamma) +
          ",beta=" + detail::format_double(beta) + ")");
}

// ---------------------------------------------------------------------------
// Commutator AB - BA.  When either factor is diagonal the product is not
// formed; entry(m,n) = (a_m - a_n) B(m,n) is exact and avoids truncation
// contamination from the matrix product.
// ---------------------------------------------------------------------------

inline OperatorMatrix commutator(const OperatorMatrix& A,
                                 const OperatorMatrix& B) {
  if (A.dim() != B.dim())
    throw std::invalid_argument("commutator: dimension mismatch");
  const Eigen::Index M = A.dim();
  const std::string label = "[" + A.label() + "," + B.label() + "]";
  if (A.is_diagonal() && B.is_diagonal())
    return OperatorMatrix::dense(MatrixKind::General, DenseMatrix::Zero(M, M),
                                 label);
  if (A.is_diagonal()) {
    const auto& a = A.diagonal_entries();
    DenseMatrix m(M, M);
    for (Eigen::Index r = 0; r < M; ++r)
      for (Eigen::Index c = 0; c < M; ++c)
        m(r, c) = (a[r] - a[c]) * B.entry(r, c);
    return OperatorMatrix::dense(MatrixKind::General, std::move(m), label);
  }
  if (B.is_diagonal()) {
    const auto& b = B.diagonal_entries();
    DenseMatrix m(M, M);
    for (Eigen::Index r = 0; r < M; ++r)
      for (Eigen::Index c = 0; c < M; ++c)
        m(r, c) = (b[c] - b[r]) * A.entry(r, c);
    return OperatorMatrix::dense(MatrixKind::General, std::move(m), label);
  }
  DenseMatrix m = A.dense_entries() * B.dense_entries() -
                  B.dense_entries() * A.dense_entries();
  return OperatorMatrix::dense(MatrixKind::General, std::move(m), label);
}

// Largest |entry(m,n) - conj(entry(n,m))|; zero for symmetric assembly.
inline double hermiticity_defect(const OperatorMatrix& A) {
  if (A.is_diagonal()) return 0.0;
  const auto& m = A.dense_entries();
  double worst = 0.0;
  for (Eigen::Index r = 0; r < A.dim(); ++r)
    for (Eigen::Index c = 0; c <= r; ++c)
      worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
  return worst;
}

}  // namespace timeop
