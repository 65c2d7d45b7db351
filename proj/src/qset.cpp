#include "qrel/qset.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace qrel {

QuantumSet::QuantumSet()
{
  static auto const u = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Unit;
    n->name = "1";
    n->atoms.push_back({"()", 1, 0});
    return std::shared_ptr<Node const>(n);
  }();
  node_ = u;
}

QuantumSet QuantumSet::classical(std::string name, std::vector<std::string> const &labels)
{
  auto n = std::make_shared<Node>();
  n->kind = Kind::Classical;
  std::set<std::string> seen;
  for (auto const &l : labels) {
    if (!seen.insert(l).second) { throw Error(ErrorKind::DuplicateLabel, "label '" + l + "' in " + name); }
    n->atoms.push_back({l, 1, 0});
  }
  n->key = {{name, 0}};
  n->name = std::move(name);
  return QuantumSet(n);
}

QuantumSet QuantumSet::atoms(std::string name, std::vector<Index> const &dims, std::vector<std::string> labels)
{
  if (labels.empty()) {
    for (size_t i = 0; i < dims.size(); ++i) { labels.push_back(std::to_string(i)); }
  }
  if (labels.size() != dims.size()) { throw Error(ErrorKind::ShapeMismatch, "labels/dims length in " + name); }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Opaque;
  std::set<std::string> seen;
  for (size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 1) { throw Error(ErrorKind::ZeroDimension, "atom '" + labels[i] + "' of " + name); }
    if (!seen.insert(labels[i]).second) { throw Error(ErrorKind::DuplicateLabel, "label '" + labels[i] + "' in " + name); }
    n->atoms.push_back({labels[i], dims[i], 0});
  }
  n->key = {{name, 0}};
  n->name = std::move(name);
  return QuantumSet(n);
}

QuantumSet QuantumSet::product(QuantumSet const &x, QuantumSet const &y)
{
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  n->a = x.node_;
  n->b = y.node_;
  n->atoms.reserve(x.size() * y.size());
  for (auto const &ax : x.atoms()) {
    for (auto const &ay : y.atoms()) { n->atoms.push_back({"(" + ax.label + "," + ay.label + ")", ax.dim * ay.dim, 0}); }
  }
  n->key = x.sort_key();
  n->key.insert(n->key.end(), y.sort_key().begin(), y.sort_key().end());
  n->name = x.name() + "><" + y.name();
  return QuantumSet(n);
}

QuantumSet QuantumSet::product_all(std::vector<QuantumSet> const &xs)
{
  if (xs.empty()) { return unit(); }
  QuantumSet r = xs[0];
  for (size_t i = 1; i < xs.size(); ++i) { r = product(r, xs[i]); }
  return r;
}

QuantumSet QuantumSet::dual(QuantumSet const &x)
{
  switch (x.kind()) {
  case Kind::Unit: return x;
  case Kind::Dual: return x.base();
  case Kind::Product: return product(dual(x.left()), dual(x.right()));
  default: break;
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Dual;
  n->a = x.node_;
  n->atoms = x.atoms();
  for (auto &a : n->atoms) { a.dual_depth ^= 1; }
  n->key = x.sort_key();
  for (auto &k : n->key) { k.second ^= 1; }
  n->name = x.name() + "*";
  return QuantumSet(n);
}

Index QuantumSet::total_dim() const
{
  Index t = 0;
  for (auto const &a : atoms()) { t += a.dim; }
  return t;
}

Index QuantumSet::max_dim() const
{
  Index t = 0;
  for (auto const &a : atoms()) { t = std::max(t, a.dim); }
  return t;
}

bool QuantumSet::is_classical() const
{
  return std::all_of(atoms().begin(), atoms().end(), [](Atom const &a) { return a.dim == 1; });
}

std::string QuantumSet::name() const { return node_->name; }

std::vector<QuantumSet> QuantumSet::factors() const
{
  if (kind() == Kind::Unit) { return {}; }
  if (kind() != Kind::Product) { return {*this}; }
  auto l = left().factors(), r = right().factors();
  l.insert(l.end(), r.begin(), r.end());
  return l;
}

int QuantumSet::index_of(std::string const &label) const
{
  for (size_t i = 0; i < size(); ++i) {
    if (atom(i).label == label) { return static_cast<int>(i); }
  }
  return -1;
}

bool QuantumSet::same_shape(QuantumSet const &o) const
{
  if (size() != o.size()) { return false; }
  for (size_t i = 0; i < size(); ++i) {
    if (dim(i) != o.dim(i)) { return false; }
  }
  return true;
}

std::string sort_name(QuantumSet const &x) { return x.name(); }

std::vector<size_t> unflatten(size_t idx, std::vector<size_t> const &radix)
{
  std::vector<size_t> d(radix.size());
  for (size_t k = radix.size(); k-- > 0;) {
    d[k] = idx % radix[k];
    idx /= radix[k];
  }
  return d;
}

size_t flatten(std::vector<size_t> const &digits, std::vector<size_t> const &radix)
{
  size_t idx = 0;
  for (size_t k = 0; k < radix.size(); ++k) { idx = idx * radix[k] + digits[k]; }
  return idx;
}

// ---------------------------------------------------------------------------

Subspace Relation::block(size_t i, size_t j) const
{
  if (auto const *s = find(i, j)) { return *s; }
  return Subspace(cod_.dim(j), dom_.dim(i));
}

Subspace const *Relation::find(size_t i, size_t j) const
{
  auto it = blocks_.find({i, j});
  return it == blocks_.end() ? nullptr : &it->second;
}

void Relation::set_block(size_t i, size_t j, Subspace s)
{
  if (i >= dom_.size() || j >= cod_.size()) { throw Error(ErrorKind::ShapeMismatch, "block index out of range"); }
  if (s.rows() != cod_.dim(j) || s.cols() != dom_.dim(i)) {
    std::ostringstream os;
    os << "block (" << i << "," << j << ") must be " << cod_.dim(j) << "x" << dom_.dim(i) << ", got " << s.rows()
       << "x" << s.cols();
    throw Error(ErrorKind::ShapeMismatch, os.str());
  }
  if (s.is_zero()) {
    blocks_.erase({i, j});
  } else {
    blocks_[{i, j}] = std::move(s);
  }
}

Index Relation::total_rank() const
{
  Index t = 0;
  for (auto const &[k, s] : blocks_) { t += s.rank(); }
  return t;
}

Relation Relation::relabel(QuantumSet dom, QuantumSet cod) const
{
  if (!dom.same_shape(dom_) || !cod.same_shape(cod_)) {
    throw Error(ErrorKind::SortMismatch, "relabel: " + dom_.name() + " -> " + cod_.name() + " vs " + dom.name() +
                                             " -> " + cod.name());
  }
  Relation r(std::move(dom), std::move(cod));
  r.blocks_ = blocks_;
  return r;
}

namespace {

void require_parallel(Relation const &r, Relation const &s, char const *op)
{
  if (!r.dom().compatible(s.dom()) || !r.cod().compatible(s.cod())) {
    throw Error(ErrorKind::SortMismatch, std::string(op) + ": " + r.dom().name() + " -> " + r.cod().name() + " vs " +
                                             s.dom().name() + " -> " + s.cod().name());
  }
}

Subspace scalar_line(CMatrix const &m) { return Subspace::from_vectors(m.rows(), m.cols(), vectorize<Cx>(m)); }

} // namespace

Relation top(QuantumSet const &x, QuantumSet const &y)
{
  Relation r(x, y);
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t j = 0; j < y.size(); ++j) { r.set_block(i, j, Subspace::full(y.dim(j), x.dim(i))); }
  }
  return r;
}

Relation bottom(QuantumSet const &x, QuantumSet const &y) { return Relation(x, y); }

Relation identity(QuantumSet const &x)
{
  Relation r(x, x);
  for (size_t i = 0; i < x.size(); ++i) {
    Index d = x.dim(i);
    r.set_block(i, i, Subspace::from_orthonormal(d, d, vectorize<Cx>(CMatrix(CMatrix::Identity(d, d))) / std::sqrt(double(d))));
  }
  return r;
}

Relation equality(QuantumSet const &x)
{
  QuantumSet xs = QuantumSet::dual(x);
  Relation r(QuantumSet::product(x, xs), QuantumSet::unit());
  for (size_t i = 0; i < x.size(); ++i) {
    Index d = x.dim(i);
    CMatrix e = CMatrix::Zero(d * d, 1);
    for (Index a = 0; a < d; ++a) { e(a * d + a, 0) = 1.0 / std::sqrt(double(d)); }
    r.set_block(i * x.size() + i, 0, Subspace::from_orthonormal(1, d * d, e));
  }
  return r;
}

Relation braiding(QuantumSet const &x, QuantumSet const &y)
{
  Relation r(QuantumSet::product(x, y), QuantumSet::product(y, x));
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t j = 0; j < y.size(); ++j) {
      Index di = x.dim(i), dj = y.dim(j);
      CMatrix sw = CMatrix::Zero(dj * di, di * dj);
      for (Index a = 0; a < di; ++a) {
        for (Index b = 0; b < dj; ++b) { sw(b * di + a, a * dj + b) = 1.0; }
      }
      r.set_block(i * y.size() + j, j * x.size() + i, scalar_line(sw));
    }
  }
  return r;
}

Relation compose(Relation const &s, Relation const &r)
{
  if (!s.dom().compatible(r.cod())) {
    throw Error(ErrorKind::SortMismatch, "compose: " + s.dom().name() + " vs " + r.cod().name());
  }
  std::vector<std::vector<std::pair<size_t, Subspace const *>>> by_dom(s.dom().size());
  for (auto const &[k, b] : s.blocks()) { by_dom[k.first].push_back({k.second, &b}); }

  Relation out(r.dom(), s.cod());
  auto it = r.blocks().begin();
  while (it != r.blocks().end()) {
    size_t const i = it->first.first;
    std::map<size_t, std::vector<CMatrix>> acc;
    for (; it != r.blocks().end() && it->first.first == i; ++it) {
      size_t const j = it->first.second;
      Subspace const &rb = it->second;
      if (by_dom[j].empty()) { continue; }
      std::vector<CMatrix> rm;
      for (Index b = 0; b < rb.rank(); ++b) { rm.push_back(rb.matrix(b)); }
      for (auto const &[k, sb] : by_dom[j]) {
        auto &cols = acc[k];
        for (Index a = 0; a < sb->rank(); ++a) {
          CMatrix sm = sb->matrix(a);
          for (auto const &m : rm) { cols.push_back(sm * m); }
        }
      }
    }
    for (auto &[k, mats] : acc) {
      out.set_block(i, k, span<Cx>(mats, s.cod().dim(k), r.dom().dim(i)));
    }
  }
  return out;
}

Relation compose_all(std::vector<Relation> const &rs)
{
  Relation acc = rs.back();
  for (size_t k = rs.size() - 1; k-- > 0;) { acc = compose(rs[k], acc); }
  return acc;
}

Relation dagger(Relation const &r)
{
  Relation out(r.cod(), r.dom());
  for (auto const &[k, b] : r.blocks()) { out.set_block(k.second, k.first, star_image(b, StarMode::Dagger)); }
  return out;
}

// Operators into/out of dual atoms are stored in the dual basis, so the
// conjugate (a†)^T of a block is its entrywise complex conjugate.
Relation conjugate(Relation const &r)
{
  Relation out(QuantumSet::dual(r.dom()), QuantumSet::dual(r.cod()));
  for (auto const &[k, b] : r.blocks()) { out.set_block(k.first, k.second, star_image(b, StarMode::Conjugate)); }
  return out;
}

Relation cross(Relation const &r, Relation const &s)
{
  Relation out(QuantumSet::product(r.dom(), s.dom()), QuantumSet::product(r.cod(), s.cod()));
  size_t const nd = s.dom().size(), nc = s.cod().size();
  for (auto const &[kr, br] : r.blocks()) {
    for (auto const &[ks, bs] : s.blocks()) {
      out.set_block(kr.first * nd + ks.first, kr.second * nc + ks.second, tensor(br, bs));
    }
  }
  return out;
}

Relation cross_all(std::vector<Relation> const &rs)
{
  if (rs.empty()) { return identity(QuantumSet::unit()); }
  Relation acc = rs[0];
  for (size_t k = 1; k < rs.size(); ++k) { acc = cross(acc, rs[k]); }
  return acc;
}

Relation negate(Relation const &r)
{
  Relation out(r.dom(), r.cod());
  for (size_t i = 0; i < r.dom().size(); ++i) {
    for (size_t j = 0; j < r.cod().size(); ++j) {
      auto const *b = r.find(i, j);
      out.set_block(i, j, b ? complement(*b) : Subspace::full(r.cod().dim(j), r.dom().dim(i)));
    }
  }
  return out;
}

Relation meet(Relation const &r, Relation const &s)
{
  require_parallel(r, s, "meet");
  Relation out(r.dom(), r.cod());
  for (auto const &[k, b] : r.blocks()) {
    if (auto const *c = s.find(k.first, k.second)) { out.set_block(k.first, k.second, meet(b, *c)); }
  }
  return out;
}

Relation join(Relation const &r, Relation const &s)
{
  require_parallel(r, s, "join");
  Relation out = r;
  for (auto const &[k, b] : s.blocks()) {
    auto const *c = r.find(k.first, k.second);
    out.set_block(k.first, k.second, c ? join(*c, b) : b);
  }
  return out;
}

Relation sasaki_arrow(Relation const &p, Relation const &q) { return join(negate(p), meet(p, q)); }

Relation sasaki_and(Relation const &p, Relation const &q) { return meet(join(p, negate(q)), q); }

double leq_margin(Relation const &r, Relation const &s)
{
  require_parallel(r, s, "leq");
  double m = 0.0;
  for (auto const &[k, b] : r.blocks()) {
    auto const *c = s.find(k.first, k.second);
    m = std::max(m, c ? leq_margin(b, *c) : 1.0);
  }
  return m;
}

double orth_margin(Relation const &r, Relation const &s)
{
  require_parallel(r, s, "perp");
  double m = 0.0;
  for (auto const &[k, b] : r.blocks()) {
    if (auto const *c = s.find(k.first, k.second)) { m = std::max(m, compare(b, *c).orth_margin); }
  }
  return m;
}

double distance(Relation const &r, Relation const &s) { return std::max(leq_margin(r, s), leq_margin(s, r)); }

bool leq(Relation const &r, Relation const &s) { return leq_margin(r, s) <= tolerances().cmp; }
bool perp(Relation const &r, Relation const &s) { return orth_margin(r, s) <= tolerances().cmp; }
bool equal(Relation const &r, Relation const &s) { return distance(r, s) <= tolerances().cmp; }

// ---------------------------------------------------------------------------

Relation permute(Relation const &r, std::vector<QuantumSet> const &sorts, std::vector<int> const &pi)
{
  size_t const n = sorts.size();
  if (pi.size() != n) { throw Error(ErrorKind::SortMismatch, "permute: permutation length"); }
  std::vector<QuantumSet> src(n);
  for (size_t k = 0; k < n; ++k) { src[k] = sorts.at(pi[k]); }
  QuantumSet src_set = QuantumSet::product_all(src);
  if (!r.dom().compatible(src_set) || r.cod().size() != 1 || r.cod().dim(0) != 1) {
    throw Error(ErrorKind::SortMismatch, "permute: relation arity " + r.dom().name() + " vs " + src_set.name());
  }
  std::vector<size_t> src_radix(n), dst_radix(n);
  for (size_t k = 0; k < n; ++k) {
    dst_radix[k] = sorts[k].size();
    src_radix[k] = src[k].size();
  }
  Relation out(QuantumSet::product_all(sorts), QuantumSet::unit());
  for (auto const &[key, b] : r.blocks()) {
    auto sa = unflatten(key.first, src_radix);
    std::vector<size_t> da(n), ddims(n), sdims(n);
    for (size_t k = 0; k < n; ++k) { da[pi[k]] = sa[k]; }
    for (size_t k = 0; k < n; ++k) {
      ddims[k] = sorts[k].dim(da[k]);
      sdims[k] = src[k].dim(sa[k]);
    }
    size_t D = 1;
    for (auto d : ddims) { D *= d; }
    CMatrix v(D, b.rank());
    std::vector<size_t> sidx(n);
    for (size_t t = 0; t < D; ++t) {
      auto didx = unflatten(t, ddims);
      for (size_t k = 0; k < n; ++k) { sidx[k] = didx[pi[k]]; }
      v.row(t) = b.basis().row(flatten(sidx, sdims));
    }
    out.set_block(flatten(da, dst_radix), 0, Subspace::from_orthonormal(1, D, std::move(v)));
  }
  return out;
}

Relation permutation_relation(std::vector<QuantumSet> const &sorts, std::vector<int> const &pi)
{
  size_t const n = sorts.size();
  // rank[f] = target position of original factor f
  std::vector<int> rank(n);
  for (size_t k = 0; k < n; ++k) { rank[pi[k]] = static_cast<int>(k); }
  std::vector<int> cur(n);
  for (size_t k = 0; k < n; ++k) { cur[k] = static_cast<int>(k); }
  auto sorts_of = [&](std::vector<int> const &c) {
    std::vector<QuantumSet> s;
    for (int f : c) { s.push_back(sorts[f]); }
    return s;
  };
  Relation acc = identity(QuantumSet::product_all(sorts));
  bool swapped = true;
  while (swapped) {
    swapped = false;
    for (size_t k = 0; k + 1 < n; ++k) {
      if (rank[cur[k]] > rank[cur[k + 1]]) {
        auto cs = sorts_of(cur);
        std::vector<Relation> parts;
        for (size_t m = 0; m < k; ++m) { parts.push_back(identity(cs[m])); }
        parts.push_back(braiding(cs[k], cs[k + 1]));
        for (size_t m = k + 2; m < n; ++m) { parts.push_back(identity(cs[m])); }
        std::swap(cur[k], cur[k + 1]);
        Relation step = cross_all(parts).relabel(QuantumSet::product_all(cs), QuantumSet::product_all(sorts_of(cur)));
        acc = compose(step, acc);
        swapped = true;
      }
    }
  }
  return acc;
}

Relation permute_via_braidings(Relation const &r, std::vector<QuantumSet> const &sorts, std::vector<int> const &pi)
{
  Relation u = permutation_relation(sorts, pi);
  return compose(r, u);
}

Relation bend(Relation const &f)
{
  QuantumSet const &y = f.cod();
  Relation g = compose(equality(y), cross(f, identity(QuantumSet::dual(y))));
  return g.relabel(QuantumSet::product(f.dom(), QuantumSet::dual(y)), QuantumSet::unit());
}

Relation unbend(Relation const &g, QuantumSet const &x, QuantumSet const &y)
{
  QuantumSet ys = QuantumSet::dual(y);
  if (!g.dom().compatible(QuantumSet::product(x, ys))) {
    throw Error(ErrorKind::SortMismatch, "unbend: arity " + g.dom().name() + " vs " + x.name() + "><" + ys.name());
  }
  Relation cup = cross(identity(x), dagger(equality(ys)));
  Relation lhs = cross(g, identity(y));
  return compose(lhs, cup).relabel(x, y);
}

Relation trace_pred(Relation const &r)
{
  if (!r.dom().compatible(r.cod())) { throw Error(ErrorKind::SortMismatch, "trace of a non-endo relation"); }
  Relation out(QuantumSet::unit(), QuantumSet::unit());
  if (orth_margin(r, identity(r.dom())) > tolerances().cmp) { out.set_block(0, 0, Subspace::full(1, 1)); }
  return out;
}

bool is_top(Relation const &r)
{
  for (size_t i = 0; i < r.dom().size(); ++i) {
    for (size_t j = 0; j < r.cod().size(); ++j) {
      auto const *b = r.find(i, j);
      if (!b || !compare(Subspace::full(b->rows(), b->cols()), *b).leq) { return false; }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

CMatrix haar_projection(std::mt19937_64 &rng, Index d, Index rank)
{
  std::normal_distribution<double> nd;
  CMatrix g(d, rank);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < rank; ++j) { g(i, j) = Cx(nd(rng), nd(rng)); }
  }
  CMatrix q = orth<Cx>(g);
  return q * q.adjoint();
}

} // namespace

Relation delta_bruteforce(QuantumSet const &x, int n_samples, std::uint64_t seed, bool transpose)
{
  size_t const n = x.size();
  Relation out(QuantumSet::product(x, QuantumSet::dual(x)), QuantumSet::unit());
  std::vector<Subspace> cur(n * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) { cur[i * n + j] = Subspace::full(1, x.dim(i) * x.dim(j)); }
  }
  // functionals ζ on H_i ⊗ H_j* with ζ·(p_i ⊗ q_j) = 0
  auto cut = [&](std::vector<CMatrix> const &p) {
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        CMatrix qj = CMatrix::Identity(x.dim(j), x.dim(j)) - p[j];
        if (transpose) { qj.transposeInPlace(); }
        CMatrix m = kron<Cx>(p[i], qj);
        if (m.norm() < 1e-14) { continue; }
        Subspace killed = complement(Subspace::from_vectors(1, m.rows(), m.conjugate()));
        cur[i * n + j] = meet(cur[i * n + j], killed);
      }
    }
  };
  for (size_t k = 0; k < n; ++k) {
    std::vector<CMatrix> p(n);
    for (size_t i = 0; i < n; ++i) {
      p[i] = (i == k) ? CMatrix(CMatrix::Identity(x.dim(i), x.dim(i))) : CMatrix(CMatrix::Zero(x.dim(i), x.dim(i)));
    }
    cut(p);
  }
  auto total = [&] {
    Index t = 0;
    for (auto const &s : cur) { t += s.rank(); }
    return t;
  };
  std::mt19937_64 rng(seed);
  Index last = total();
  int stable = 0;
  for (int s = 0; s < n_samples && stable < 10; ++s) {
    std::vector<CMatrix> p(n);
    for (size_t i = 0; i < n; ++i) {
      Index d = x.dim(i);
      p[i] = haar_projection(rng, d, (s % 2 == 0) ? 1 : d / 2);
    }
    cut(p);
    Index now = total();
    stable = (now == last) ? stable + 1 : 0;
    last = now;
  }
  for (size_t b = 0; b < n * n; ++b) { out.set_block(b, 0, cur[b]); }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Index> offsets(QuantumSet const &x)
{
  std::vector<Index> o(x.size() + 1, 0);
  for (size_t i = 0; i < x.size(); ++i) { o[i + 1] = o[i] + x.dim(i); }
  return o;
}

} // namespace

double weaver_bimodule_margin(Subspace const &v, QuantumSet const &x, QuantumSet const &y)
{
  auto ox = offsets(x), oy = offsets(y);
  double m = 0.0;
  for (Index k = 0; k < v.rank(); ++k) {
    CMatrix a = v.matrix(k);
    for (size_t i = 0; i < x.size(); ++i) {
      for (size_t j = 0; j < y.size(); ++j) {
        CMatrix c = CMatrix::Zero(a.rows(), a.cols());
        c.block(oy[j], ox[i], y.dim(j), x.dim(i)) = a.block(oy[j], ox[i], y.dim(j), x.dim(i));
        CVector cv = vectorize<Cx>(c);
        m = std::max(m, (cv - v.basis() * (v.basis().adjoint() * cv)).norm());
      }
    }
  }
  return m;
}

Relation weaver_to_blocks(Subspace const &v, QuantumSet const &x, QuantumSet const &y)
{
  if (v.rows() != y.total_dim() || v.cols() != x.total_dim()) {
    throw Error(ErrorKind::ShapeMismatch, "weaver: ambient must be (Σ dim Y) x (Σ dim X)");
  }
  double m = weaver_bimodule_margin(v, x, y);
  if (m > tolerances().cmp) {
    std::ostringstream os;
    os << "subspace is not a bimodule over the atom projections (margin " << m << ")";
    throw Error(ErrorKind::NotAQuantumRelation, os.str());
  }
  auto ox = offsets(x), oy = offsets(y);
  Relation r(x, y);
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t j = 0; j < y.size(); ++j) {
      std::vector<CMatrix> mats;
      for (Index k = 0; k < v.rank(); ++k) {
        mats.push_back(v.matrix(k).block(oy[j], ox[i], y.dim(j), x.dim(i)));
      }
      r.set_block(i, j, span<Cx>(mats, y.dim(j), x.dim(i)));
    }
  }
  return r;
}

Subspace weaver_to_global(Relation const &r)
{
  auto ox = offsets(r.dom()), oy = offsets(r.cod());
  Index rows = r.cod().total_dim(), cols = r.dom().total_dim();
  std::vector<CMatrix> mats;
  for (auto const &[k, b] : r.blocks()) {
    for (Index t = 0; t < b.rank(); ++t) {
      CMatrix m = CMatrix::Zero(rows, cols);
      m.block(oy[k.second], ox[k.first], b.rows(), b.cols()) = b.matrix(t);
      mats.push_back(m);
    }
  }
  return span<Cx>(mats, rows, cols);
}

} // namespace qrel
