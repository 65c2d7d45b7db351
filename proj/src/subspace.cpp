#include "qrel/subspace.hpp"

#include <algorithm>
#include <sstream>

namespace qrel {

const char *to_string(ErrorKind k)
{
  switch (k) {
  case ErrorKind::ShapeMismatch: return "ShapeMismatch";
  case ErrorKind::SortMismatch: return "SortMismatch";
  case ErrorKind::DuplicateLabel: return "DuplicateLabel";
  case ErrorKind::ZeroDimension: return "ZeroDimension";
  case ErrorKind::NotAQuantumRelation: return "NotAQuantumRelation";
  case ErrorKind::FreeVariableNotInContext: return "FreeVariableNotInContext";
  case ErrorKind::SortError: return "SortError";
  case ErrorKind::HasFreeVariables: return "HasFreeVariables";
  case ErrorKind::Nonduplication: return "Nonduplication";
  case ErrorKind::ModeRequiresSingleAtom: return "ModeRequiresSingleAtom";
  case ErrorKind::FamilyInvariantViolation: return "FamilyInvariantViolation";
  case ErrorKind::NotProjections: return "NotProjections";
  case ErrorKind::LabelMismatch: return "LabelMismatch";
  case ErrorKind::NotAFunction: return "NotAFunction";
  case ErrorKind::InvariantViolation: return "InvariantViolation";
  case ErrorKind::TooLarge: return "TooLarge";
  case ErrorKind::BadParams: return "BadParams";
  case ErrorKind::NonClassicalSort: return "NonClassicalSort";
  }
  return "Error";
}

Tolerances &tolerances()
{
  static Tolerances t;
  return t;
}

namespace {

using Eigen::Index;

template <typename S>
void require_same(BasicSubspace<S> const &s, BasicSubspace<S> const &t, char const *op)
{
  if (!s.same_ambient(t)) {
    std::ostringstream os;
    os << op << ": ambient " << s.rows() << "x" << s.cols() << " vs " << t.rows() << "x" << t.cols();
    throw Error(ErrorKind::ShapeMismatch, os.str());
  }
}

template <typename S>
double spectral_norm(Mat<S> const &m)
{
  if (m.size() == 0) { return 0.0; }
  if (m.cols() == 1) { return m.norm(); }
  Eigen::JacobiSVD<Mat<S>> svd(m);
  return svd.singularValues()(0);
}

// Right kernel of m, as orthonormal columns.
template <typename S>
Mat<S> kernel(Mat<S> const &m)
{
  Index const n = m.cols();
  if (n == 0) { return Mat<S>(0, 0); }
  Mat<S> r = m;
  if (m.rows() > n) {
    Eigen::HouseholderQR<Mat<S>> qr(m);
    r = qr.matrixQR().topRows(n).template triangularView<Eigen::Upper>();
  }
  Eigen::JacobiSVD<Mat<S>> svd(r, Eigen::ComputeFullV);
  auto const &s = svd.singularValues();
  double const thr = tolerances().rank * std::max(1.0, s.size() ? s(0) : 0.0);
  Index nz = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > thr) { ++nz; }
  }
  return svd.matrixV().rightCols(n - nz);
}

} // namespace

template <typename S>
Mat<S> orth(Mat<S> const &m)
{
  Index const n = m.rows(), k = m.cols();
  if (n == 0 || k == 0) { return Mat<S>(n, 0); }
  Mat<S> u;
  Eigen::VectorXd s;
  if (n >= k) {
    Eigen::HouseholderQR<Mat<S>> qr(m);
    Mat<S> q = qr.householderQ() * Mat<S>::Identity(n, k);
    Mat<S> r = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<Mat<S>> svd(r, Eigen::ComputeThinU);
    u = q * svd.matrixU();
    s = svd.singularValues();
  } else {
    Eigen::JacobiSVD<Mat<S>> svd(m, Eigen::ComputeThinU);
    u = svd.matrixU();
    s = svd.singularValues();
  }
  double const thr = tolerances().rank * std::max(1.0, s(0));
  Index r = 0;
  while (r < s.size() && s(r) > thr) { ++r; }
  return u.leftCols(r);
}

template <typename S>
Vec<S> vectorize(Mat<S> const &m)
{
  Vec<S> v(m.size());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) { v(i * m.cols() + j) = m(i, j); }
  }
  return v;
}

template <typename S>
Mat<S> unvectorize(Index rows, Index cols, Vec<S> const &v)
{
  Mat<S> m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) { m(i, j) = v(i * cols + j); }
  }
  return m;
}

template <typename S>
Mat<S> kron(Mat<S> const &a, Mat<S> const &b)
{
  Mat<S> k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return k;
}

template <typename S>
BasicSubspace<S>::BasicSubspace(Index rows, Index cols)
    : rows_(rows), cols_(cols), q_(rows * cols, 0)
{
  if (rows < 0 || cols < 0) { throw Error(ErrorKind::ShapeMismatch, "negative ambient shape"); }
}

template <typename S>
BasicSubspace<S> BasicSubspace<S>::full(Index rows, Index cols)
{
  return from_orthonormal(rows, cols, Matrix::Identity(rows * cols, rows * cols));
}

template <typename S>
BasicSubspace<S> BasicSubspace<S>::from_vectors(Index rows, Index cols, Matrix const &vecs)
{
  if (vecs.rows() != rows * cols) { throw Error(ErrorKind::ShapeMismatch, "vector length disagrees with ambient"); }
  BasicSubspace s(rows, cols);
  s.q_ = orth<S>(vecs);
  return s;
}

template <typename S>
BasicSubspace<S> BasicSubspace<S>::from_orthonormal(Index rows, Index cols, Matrix q)
{
  if (q.rows() != rows * cols) { throw Error(ErrorKind::ShapeMismatch, "basis length disagrees with ambient"); }
  BasicSubspace s(rows, cols);
  s.q_ = std::move(q);
  return s;
}

template <typename S>
typename BasicSubspace<S>::Matrix BasicSubspace<S>::matrix(Index k) const
{
  return unvectorize<S>(rows_, cols_, q_.col(k));
}

template <typename S>
BasicSubspace<S> span(std::vector<Mat<S>> const &mats, Index rows, Index cols)
{
  Mat<S> v(rows * cols, static_cast<Index>(mats.size()));
  for (size_t k = 0; k < mats.size(); ++k) {
    if (mats[k].rows() != rows || mats[k].cols() != cols) {
      std::ostringstream os;
      os << "span: matrix " << k << " is " << mats[k].rows() << "x" << mats[k].cols() << ", ambient " << rows << "x"
         << cols;
      throw Error(ErrorKind::ShapeMismatch, os.str());
    }
    v.col(static_cast<Index>(k)) = vectorize<S>(mats[k]);
  }
  return BasicSubspace<S>::from_vectors(rows, cols, v);
}

template <typename S>
BasicSubspace<S> join(BasicSubspace<S> const &s, BasicSubspace<S> const &t)
{
  require_same(s, t, "join");
  if (s.is_zero()) { return t; }
  if (t.is_zero()) { return s; }
  Mat<S> v(s.ambient_dim(), s.rank() + t.rank());
  v << s.basis(), t.basis();
  return BasicSubspace<S>::from_vectors(s.rows(), s.cols(), v);
}

template <typename S>
BasicSubspace<S> join_all(std::vector<BasicSubspace<S>> const &ss, Index rows, Index cols)
{
  Index total = 0;
  for (auto const &s : ss) {
    if (s.rows() != rows || s.cols() != cols) { throw Error(ErrorKind::ShapeMismatch, "join_all: ambient"); }
    total += s.rank();
  }
  Mat<S> v(rows * cols, total);
  Index c = 0;
  for (auto const &s : ss) {
    v.middleCols(c, s.rank()) = s.basis();
    c += s.rank();
  }
  return BasicSubspace<S>::from_vectors(rows, cols, v);
}

// Kernel of (1 - P_T) restricted to S; cheaper than complementing twice.
template <typename S>
BasicSubspace<S> meet(BasicSubspace<S> const &s, BasicSubspace<S> const &t)
{
  require_same(s, t, "meet");
  if (s.is_zero() || t.is_zero()) { return BasicSubspace<S>(s.rows(), s.cols()); }
  if (t.is_full()) { return s; }
  if (s.is_full()) { return t; }
  Mat<S> m = s.basis() - t.basis() * (t.basis().adjoint() * s.basis());
  Mat<S> k = kernel<S>(m);
  return BasicSubspace<S>::from_orthonormal(s.rows(), s.cols(), s.basis() * k);
}

template <typename S>
BasicSubspace<S> complement(BasicSubspace<S> const &s)
{
  Index const n = s.ambient_dim(), r = s.rank();
  if (r == 0) { return BasicSubspace<S>::full(s.rows(), s.cols()); }
  if (r == n) { return BasicSubspace<S>(s.rows(), s.cols()); }
  Eigen::HouseholderQR<Mat<S>> qr(s.basis());
  Mat<S> q = qr.householderQ();
  return BasicSubspace<S>::from_orthonormal(s.rows(), s.cols(), q.rightCols(n - r));
}

template <typename S>
double leq_margin(BasicSubspace<S> const &s, BasicSubspace<S> const &t)
{
  require_same(s, t, "compare");
  if (s.is_zero() || t.is_full()) { return 0.0; }
  if (t.is_zero()) { return 1.0; }
  Mat<S> m = s.basis() - t.basis() * (t.basis().adjoint() * s.basis());
  return spectral_norm<S>(m);
}

template <typename S>
Comparison<S> compare(BasicSubspace<S> const &s, BasicSubspace<S> const &t)
{
  double const tol = tolerances().cmp;
  Comparison<S> c{};
  c.leq_margin = leq_margin(s, t);
  c.geq_margin = leq_margin(t, s);
  c.orth_margin = (s.is_zero() || t.is_zero()) ? 0.0 : spectral_norm<S>(Mat<S>(t.basis().adjoint() * s.basis()));
  c.leq = c.leq_margin <= tol;
  c.geq = c.geq_margin <= tol;
  c.equal = c.leq && c.geq;
  c.orthogonal = c.orth_margin <= tol;
  return c;
}

template <typename S>
double distance(BasicSubspace<S> const &s, BasicSubspace<S> const &t)
{
  return std::max(leq_margin(s, t), leq_margin(t, s));
}

template <typename S>
bool contains(BasicSubspace<S> const &s, Mat<S> const &m)
{
  if (m.rows() != s.rows() || m.cols() != s.cols()) { throw Error(ErrorKind::ShapeMismatch, "contains"); }
  Vec<S> v = vectorize<S>(m);
  Vec<S> r = v - s.basis() * (s.basis().adjoint() * v);
  return r.norm() <= tolerances().cmp * std::max(1.0, v.norm());
}

template <typename S>
BasicSubspace<S> mul_span(BasicSubspace<S> const &s, BasicSubspace<S> const &t)
{
  if (s.cols() != t.rows()) {
    std::ostringstream os;
    os << "mul_span: " << s.rows() << "x" << s.cols() << " * " << t.rows() << "x" << t.cols();
    throw Error(ErrorKind::ShapeMismatch, os.str());
  }
  if (s.is_zero() || t.is_zero()) { return BasicSubspace<S>(s.rows(), t.cols()); }
  std::vector<Mat<S>> tm;
  tm.reserve(t.rank());
  for (Index j = 0; j < t.rank(); ++j) { tm.push_back(t.matrix(j)); }
  Mat<S> v(s.rows() * t.cols(), s.rank() * t.rank());
  for (Index i = 0; i < s.rank(); ++i) {
    Mat<S> si = s.matrix(i);
    for (Index j = 0; j < t.rank(); ++j) { v.col(i * t.rank() + j) = vectorize<S>(Mat<S>(si * tm[j])); }
  }
  return BasicSubspace<S>::from_vectors(s.rows(), t.cols(), v);
}

template <typename S>
BasicSubspace<S> tensor(BasicSubspace<S> const &s, BasicSubspace<S> const &t)
{
  Index const rows = s.rows() * t.rows(), cols = s.cols() * t.cols();
  Mat<S> v(rows * cols, s.rank() * t.rank());
  for (Index i = 0; i < s.rank(); ++i) {
    Mat<S> si = s.matrix(i);
    for (Index j = 0; j < t.rank(); ++j) { v.col(i * t.rank() + j) = vectorize<S>(kron<S>(si, t.matrix(j))); }
  }
  return BasicSubspace<S>::from_orthonormal(rows, cols, std::move(v));
}

template <typename S>
BasicSubspace<S> star_image(BasicSubspace<S> const &s, StarMode mode)
{
  if (mode == StarMode::Conjugate) { return BasicSubspace<S>::from_orthonormal(s.rows(), s.cols(), s.basis().conjugate()); }
  Mat<S> v(s.ambient_dim(), s.rank());
  for (Index k = 0; k < s.rank(); ++k) {
    Mat<S> m = s.matrix(k);
    v.col(k) = mode == StarMode::Dagger ? vectorize<S>(Mat<S>(m.adjoint())) : vectorize<S>(Mat<S>(m.transpose()));
  }
  return BasicSubspace<S>::from_orthonormal(s.cols(), s.rows(), std::move(v));
}

template <typename S>
BasicSubspace<S> residual_factor(BasicSubspace<S> const &v, BasicSubspace<S> const &w, Index b_rows, Index b_cols)
{
  Index const ar = v.rows(), ac = v.cols();
  if (w.rows() != ar * b_rows || w.cols() != ac * b_cols) {
    throw Error(ErrorKind::ShapeMismatch, "residual_factor: W does not factor as A ⊗ B");
  }
  if (v.is_zero() || w.is_full()) { return BasicSubspace<S>::full(b_rows, b_cols); }
  Index const nb = b_rows * b_cols, nw = w.ambient_dim(), wc = ac * b_cols;
  Mat<S> racc(0, nb);
  for (Index i = 0; i < v.rank(); ++i) {
    Mat<S> vi = v.matrix(i);
    Mat<S> k = Mat<S>::Zero(nw, nb);
    for (Index br = 0; br < b_rows; ++br) {
      for (Index bc = 0; bc < b_cols; ++bc) {
        Index const col = br * b_cols + bc;
        for (Index r = 0; r < ar; ++r) {
          for (Index c = 0; c < ac; ++c) { k((r * b_rows + br) * wc + c * b_cols + bc, col) = vi(r, c); }
        }
      }
    }
    if (!w.is_zero()) { k -= w.basis() * (w.basis().adjoint() * k); }
    Mat<S> stacked(racc.rows() + nw, nb);
    stacked << racc, k;
    if (stacked.rows() > nb) {
      Eigen::HouseholderQR<Mat<S>> qr(stacked);
      racc = qr.matrixQR().topRows(nb).template triangularView<Eigen::Upper>();
    } else {
      racc = stacked;
    }
  }
  return BasicSubspace<S>::from_orthonormal(b_rows, b_cols, kernel<S>(racc));
}

#define QREL_INSTANTIATE(S)                                                                                   \
  template class BasicSubspace<S>;                                                                            \
  template Mat<S> orth<S>(Mat<S> const &);                                                                    \
  template Vec<S> vectorize<S>(Mat<S> const &);                                                               \
  template Mat<S> unvectorize<S>(Index, Index, Vec<S> const &);                                               \
  template Mat<S> kron<S>(Mat<S> const &, Mat<S> const &);                                                    \
  template BasicSubspace<S> span<S>(std::vector<Mat<S>> const &, Index, Index);                               \
  template BasicSubspace<S> join<S>(BasicSubspace<S> const &, BasicSubspace<S> const &);                      \
  template BasicSubspace<S> join_all<S>(std::vector<BasicSubspace<S>> const &, Index, Index);                 \
  template BasicSubspace<S> meet<S>(BasicSubspace<S> const &, BasicSubspace<S> const &);                      \
  template BasicSubspace<S> complement<S>(BasicSubspace<S> const &);                                          \
  template Comparison<S> compare<S>(BasicSubspace<S> const &, BasicSubspace<S> const &);                      \
  template double leq_margin<S>(BasicSubspace<S> const &, BasicSubspace<S> const &);                          \
  template double distance<S>(BasicSubspace<S> const &, BasicSubspace<S> const &);                            \
  template bool contains<S>(BasicSubspace<S> const &, Mat<S> const &);                                        \
  template BasicSubspace<S> mul_span<S>(BasicSubspace<S> const &, BasicSubspace<S> const &);                  \
  template BasicSubspace<S> tensor<S>(BasicSubspace<S> const &, BasicSubspace<S> const &);                    \
  template BasicSubspace<S> star_image<S>(BasicSubspace<S> const &, StarMode);                                \
  template BasicSubspace<S> residual_factor<S>(BasicSubspace<S> const &, BasicSubspace<S> const &, Index, Index);

QREL_INSTANTIATE(double)
QREL_INSTANTIATE(Cx)

} // namespace qrel
