#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "qrel/errors.hpp"

// Subspaces of operator spaces L(H,K), stored as an orthonormal basis of
// row-major vectorized matrices (Hilbert-Schmidt coordinates).

namespace qrel {

using Cx = std::complex<double>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatrix = Mat<Cx>;
using CVector = Vec<Cx>;

// Numerical thresholds. `cmp` is the pass threshold for comparisons and can be
// overridden from the command line; `warn` bounds the instability band.
struct Tolerances
{
  double rank = 1e-9;
  double cmp = 1e-8;
  double warn = 1e-6;
};
Tolerances &tolerances();

enum class StarMode { Dagger, Transpose, Conjugate };

template <typename Scalar = Cx>
class BasicSubspace
{
public:
  using Matrix = Mat<Scalar>;

  BasicSubspace() = default;
  // Zero subspace of L(ℂ^cols, ℂ^rows).
  BasicSubspace(Eigen::Index rows, Eigen::Index cols);

  static BasicSubspace zero(Eigen::Index rows, Eigen::Index cols) { return {rows, cols}; }
  static BasicSubspace full(Eigen::Index rows, Eigen::Index cols);
  // Span of the columns of `vecs` (vectorized matrices), rank-revealing.
  static BasicSubspace from_vectors(Eigen::Index rows, Eigen::Index cols, Matrix const &vecs);
  // Trusts that `q` already has orthonormal columns.
  static BasicSubspace from_orthonormal(Eigen::Index rows, Eigen::Index cols, Matrix q);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  Eigen::Index ambient_dim() const { return rows_ * cols_; }
  Eigen::Index rank() const { return q_.cols(); }
  bool is_zero() const { return q_.cols() == 0; }
  bool is_full() const { return q_.cols() == ambient_dim(); }

  Matrix const &basis() const { return q_; }
  Matrix matrix(Eigen::Index k) const;
  Matrix projector() const { return q_ * q_.adjoint(); }
  bool same_ambient(BasicSubspace const &o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

private:
  Eigen::Index rows_ = 0, cols_ = 0;
  Matrix q_;
};

using Subspace = BasicSubspace<Cx>;

template <typename Scalar>
struct Comparison
{
  bool leq, geq, equal, orthogonal;
  double leq_margin, geq_margin, orth_margin;
  double equal_margin() const { return std::max(leq_margin, geq_margin); }
};

// Orthonormal basis of the column space at the rank tolerance.
template <typename Scalar>
Mat<Scalar> orth(Mat<Scalar> const &m);

template <typename Scalar>
Vec<Scalar> vectorize(Mat<Scalar> const &m);
template <typename Scalar>
Mat<Scalar> unvectorize(Eigen::Index rows, Eigen::Index cols, Vec<Scalar> const &v);

template <typename Scalar>
BasicSubspace<Scalar> span(std::vector<Mat<Scalar>> const &mats, Eigen::Index rows, Eigen::Index cols);
template <typename Scalar>
BasicSubspace<Scalar> join(BasicSubspace<Scalar> const &s, BasicSubspace<Scalar> const &t);
template <typename Scalar>
BasicSubspace<Scalar> join_all(std::vector<BasicSubspace<Scalar>> const &ss, Eigen::Index rows, Eigen::Index cols);
template <typename Scalar>
BasicSubspace<Scalar> meet(BasicSubspace<Scalar> const &s, BasicSubspace<Scalar> const &t);
template <typename Scalar>
BasicSubspace<Scalar> complement(BasicSubspace<Scalar> const &s);
template <typename Scalar>
Comparison<Scalar> compare(BasicSubspace<Scalar> const &s, BasicSubspace<Scalar> const &t);
// Spectral norm of (1 - P_T) P_S.
template <typename Scalar>
double leq_margin(BasicSubspace<Scalar> const &s, BasicSubspace<Scalar> const &t);
template <typename Scalar>
double distance(BasicSubspace<Scalar> const &s, BasicSubspace<Scalar> const &t);
template <typename Scalar>
bool contains(BasicSubspace<Scalar> const &s, Mat<Scalar> const &m);
template <typename Scalar>
BasicSubspace<Scalar> mul_span(BasicSubspace<Scalar> const &s, BasicSubspace<Scalar> const &t);
template <typename Scalar>
BasicSubspace<Scalar> tensor(BasicSubspace<Scalar> const &s, BasicSubspace<Scalar> const &t);
template <typename Scalar>
BasicSubspace<Scalar> star_image(BasicSubspace<Scalar> const &s, StarMode mode);
// Largest T with V ⊗ T ⊆ W; W lives in L(A_cols·B_cols, A_rows·B_rows).
template <typename Scalar>
BasicSubspace<Scalar> residual_factor(BasicSubspace<Scalar> const &v, BasicSubspace<Scalar> const &w,
                                      Eigen::Index b_rows, Eigen::Index b_cols);

template <typename Scalar>
Mat<Scalar> kron(Mat<Scalar> const &a, Mat<Scalar> const &b);

extern template class BasicSubspace<double>;
extern template class BasicSubspace<Cx>;

} // namespace qrel
