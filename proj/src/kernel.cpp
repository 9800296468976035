// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fockkit/kernel.hpp"

#include <cmath>
#include <unordered_map>

namespace fockkit {

int block_rows(const PointSpace& space, const Table& t) {
  return space.chain_kdim(t.out_mask()) * space.initial_dim();
}

int block_cols(const PointSpace& space, const Table& t) {
  return space.chain_kdim(t.in_mask()) * space.initial_dim();
}

void Kernel::check_shape(const Table& t, const Matrix& m) const {
  if (!space_) throw std::logic_error("kernel not bound to a space");
  if (!t.valid()) throw std::invalid_argument("table chains are not pairwise disjoint");
  if (m.rows() != block_rows(*space_, t) || m.cols() != block_cols(*space_, t))
    throw std::invalid_argument("block shape does not match table");
}

void Kernel::set_block(const Table& t, Matrix m) {
  check_shape(t, m);
  blocks_[t.key()] = std::move(m);
}

void Kernel::add_block(const Table& t, const Matrix& m) {
  check_shape(t, m);
  auto [it, inserted] = blocks_.try_emplace(t.key(), m);
  if (!inserted) it->second += m;
}

const Matrix* Kernel::block(const Table& t) const {
  auto it = blocks_.find(t.key());
  return it == blocks_.end() ? nullptr : &it->second;
}

Kernel& Kernel::operator+=(const Kernel& o) {
  if (!space_) space_ = o.space_;
  if (!same_space(o)) throw std::invalid_argument("kernels on different spaces");
  for (const auto& [k, b] : o.blocks_) {
    auto [it, inserted] = blocks_.try_emplace(k, b);
    if (!inserted) it->second += b;
  }
  return *this;
}

Kernel& Kernel::operator-=(const Kernel& o) {
  if (!space_) space_ = o.space_;
  if (!same_space(o)) throw std::invalid_argument("kernels on different spaces");
  for (const auto& [k, b] : o.blocks_) {
    auto [it, inserted] = blocks_.try_emplace(k, -b);
    if (!inserted) it->second -= b;
  }
  return *this;
}

Kernel& Kernel::operator*=(cplx c) {
  for (auto& [k, b] : blocks_) b *= c;
  return *this;
}

double Kernel::total_frobenius() const {
  double acc = 0.0;
  for (const auto& [k, b] : blocks_) acc += b.squaredNorm();
  return std::sqrt(acc);
}

double Kernel::max_block_norm() const {
  double acc = 0.0;
  for (const auto& [k, b] : blocks_) acc = std::max(acc, spectral_norm(b));
  return acc;
}

void Kernel::prune(double tol) {
  for (auto it = blocks_.begin(); it != blocks_.end();)
    it = it->second.norm() <= tol ? blocks_.erase(it) : std::next(it);
}

double kernel_distance(const Kernel& a, const Kernel& b) {
  if (!a.same_space(b)) throw std::invalid_argument("kernels on different spaces");
  double acc = 0.0;
  for (const auto& [k, blk] : a.blocks()) {
    const Matrix* other = b.block(Table::from_key(k));
    acc += other ? (blk - *other).squaredNorm() : blk.squaredNorm();
  }
  for (const auto& [k, blk] : b.blocks())
    if (!a.block(Table::from_key(k))) acc += blk.squaredNorm();
  return std::sqrt(acc);
}

Kernel unit_kernel(const PointSpace& space) {
  Kernel k(space);
  for_each_subset(space.full_mask(), [&](ChainMask g) {
    Table t;
    t[Role::Gauge] = g;
    int d = space.chain_kdim(g) * space.initial_dim();
    k.set_block(t, Matrix::Identity(d, d));
  });
  return k;
}

Kernel star_adjoint(const Kernel& k) {
  Kernel out(k.space());
  for (const auto& [key, b] : k.blocks()) {
    Table t = Table::from_key(key);
    std::swap(t[Role::Ann], t[Role::Cre]);
    out.set_block(t, b.adjoint());
  }
  return out;
}

Kernel kernel_product(const Kernel& x, const Kernel& y) {
  if (!x.same_space(y)) throw std::invalid_argument("kernels on different spaces");
  const PointSpace& sp = x.space();
  Kernel out(sp);

  // Bucket the right factor by its output point set; a pair composes only
  // when the left factor's input set coincides with it.
  std::unordered_map<ChainMask, std::vector<const std::pair<const std::uint64_t, Matrix>*>> by_out;
  for (const auto& kv : y.blocks()) by_out[Table::from_key(kv.first).out_mask()].push_back(&kv);

  for (const auto& [xkey, xb] : x.blocks()) {
    const Table s = Table::from_key(xkey);
    auto bucket = by_out.find(s.in_mask());
    if (bucket == by_out.end()) continue;
    for (const auto* ykv : bucket->second) {
      const Table t = Table::from_key(ykv->first);
      Table o;
      o[Role::Scalar] = (s[Role::Scalar] & ~t[Role::Ann]) | (t[Role::Scalar] & ~s[Role::Cre]) |
                        (s[Role::Ann] & t[Role::Cre]);
      o[Role::Ann] = (t[Role::Ann] & ~s[Role::Cre]) | (s[Role::Ann] & t[Role::Gauge]);
      o[Role::Cre] = (s[Role::Cre] & ~t[Role::Ann]) | (s[Role::Gauge] & t[Role::Cre]);
      o[Role::Gauge] = (s[Role::Gauge] & t[Role::Gauge]) | (s[Role::Cre] & t[Role::Ann]);
      const double w = sp.chain_weight((s[Role::Scalar] | s[Role::Cre]) &
                                       (t[Role::Scalar] | t[Role::Ann]));
      out.add_block(o, w * (xb * ykv->second));
    }
  }
  out.prune();
  return out;
}

WeightQuadruple WeightQuadruple::constant(const PointSpace& space, double s, double a, double c,
                                          double g) {
  WeightQuadruple q;
  q[Role::Scalar] = constant_weight(space, s);
  q[Role::Ann] = constant_weight(space, a);
  q[Role::Cre] = constant_weight(space, c);
  q[Role::Gauge] = constant_weight(space, g);
  return q;
}

double WeightQuadruple::table_product(const PointSpace& space, const Table& t) const {
  double p = 1.0;
  for (Role r : kRoles) p *= weight_product(space, (*this)[r], t[r]);
  return p;
}

namespace {
WeightQuadruple quadruple_product_impl(const PointSpace& space, const WeightQuadruple& a,
                                       const WeightQuadruple& g, bool with_width) {
  WeightQuadruple out = WeightQuadruple::constant(space, 0, 0, 0, 0);
  for (int i = 0; i < space.size(); ++i) {
    const double w = with_width ? space.weight(i) : 0.0;
    const double as = a[Role::Scalar][i], aa = a[Role::Ann][i], ac = a[Role::Cre][i],
                 ag = a[Role::Gauge][i];
    const double gs = g[Role::Scalar][i], ga = g[Role::Ann][i], gc = g[Role::Cre][i],
                 gg = g[Role::Gauge][i];
    out[Role::Scalar][i] = as + gs + aa * gc + w * as * gs;
    out[Role::Ann][i] = ga + aa * gg + w * as * ga;
    out[Role::Cre][i] = ac + ag * gc + w * ac * gs;
    out[Role::Gauge][i] = ag * gg + w * ac * ga;
  }
  return out;
}
}  // namespace

WeightQuadruple quadruple_product(const PointSpace& space, const WeightQuadruple& a,
                                  const WeightQuadruple& g) {
  return quadruple_product_impl(space, a, g, true);
}

WeightQuadruple triangular_quadruple_product(const PointSpace& space, const WeightQuadruple& a,
                                             const WeightQuadruple& g) {
  return quadruple_product_impl(space, a, g, false);
}

double relative_norm(const Kernel& k, const WeightQuadruple& alpha) {
  double best = 0.0;
  for (const auto& [key, b] : k.blocks()) {
    const double nb = spectral_norm(b);
    if (nb == 0.0) continue;
    const double denom = alpha.table_product(k.space(), Table::from_key(key));
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    best = std::max(best, nb / denom);
  }
  return best;
}

double projective_norm(const Kernel& k, const WeightFunction& q, const WeightFunction& r) {
  const PointSpace& sp = k.space();
  for (double v : q)
    if (!(v >= 1.0)) throw std::invalid_argument("projective norm requires q >= 1");
  for (double v : r)
    if (!(v > 0.0)) throw std::invalid_argument("projective norm requires r > 0");

  // inner[s-chain][(ann,cre)] = max over gauge chains of (||block|| / q(gauge))^2
  std::map<ChainMask, std::map<std::pair<ChainMask, ChainMask>, double>> inner;
  for (const auto& [key, b] : k.blocks()) {
    Table t = Table::from_key(key);
    double val = spectral_norm(b) / weight_product(sp, q, t[Role::Gauge]);
    auto& cell = inner[t[Role::Scalar]][{t[Role::Ann], t[Role::Cre]}];
    cell = std::max(cell, val * val);
  }
  double total = 0.0;
  for (const auto& [s, cells] : inner) {
    double acc = 0.0;
    for (const auto& [ac, m2] : cells) {
      const auto& [an, cr] = ac;
      acc += sp.chain_weight(an) * sp.chain_weight(cr) * m2 *
             weight_product(sp, r, an | cr);
    }
    total += sp.chain_weight(s) * std::sqrt(acc);
  }
  return total;
}

double exponential_bound(double norm_alpha, const WeightQuadruple& alpha,
                         const WeightFunction& r, const WeightFunction& q,
                         const PointSpace& space) {
  double expo = 0.0;
  for (int i = 0; i < space.size(); ++i) {
    if (alpha[Role::Gauge][i] > q[i])
      throw std::invalid_argument("exponential bound requires alpha_gauge <= q");
    const double ac = alpha[Role::Cre][i], aa = alpha[Role::Ann][i];
    expo += space.weight(i) * (alpha[Role::Scalar][i] + r[i] * (ac * ac + aa * aa) / 2.0);
  }
  return norm_alpha * std::exp(expo);
}

Kernel exponential_kernel(const PointSpace& space, const WeightQuadruple& alpha) {
  for (int i = 0; i < space.size(); ++i)
    if (space.dim(i) != 1)
      throw std::invalid_argument("exponential kernel requires multiplicity 1");
  Kernel k(space);
  const int dh = space.initial_dim();
  for (const Table& t : enumerate_tables(space)) {
    double v = alpha.table_product(space, t);
    if (v != 0.0) k.set_block(t, v * Matrix::Identity(dh, dh));
  }
  return k;
}

namespace {
struct Layout {
  std::vector<int> pts;   // ascending; -1 marks the initial-space factor
  std::vector<int> dims;
  std::vector<int> strides;
  int total = 1;
};

Layout build_layout(const PointSpace& sp, ChainMask m) {
  Layout l;
  for (int p : chain_indices(m)) {
    l.pts.push_back(p);
    l.dims.push_back(sp.dim(p));
  }
  l.pts.push_back(-1);
  l.dims.push_back(sp.initial_dim());
  l.strides.assign(l.dims.size(), 1);
  for (int i = static_cast<int>(l.dims.size()) - 2; i >= 0; --i)
    l.strides[i] = l.strides[i + 1] * l.dims[i + 1];
  l.total = l.strides[0] * l.dims[0];
  return l;
}

void decompose(const Layout& l, int idx, std::vector<int>& digits) {
  digits.resize(l.dims.size());
  for (std::size_t i = 0; i < l.dims.size(); ++i) {
    digits[i] = idx / l.strides[i];
    idx %= l.strides[i];
  }
}
}  // namespace

Matrix insert_gauge_factors(const PointSpace& space, const Table& base, const Matrix& block,
                            ChainMask extra, const std::vector<Matrix>& mats) {
  if (extra & base.union_mask())
    throw std::invalid_argument("extra gauge points overlap the base table");
  const auto extra_pts = chain_indices(extra);
  if (mats.size() != extra_pts.size()) throw std::invalid_argument("factor matrix count mismatch");

  Table big = base;
  big[Role::Gauge] |= extra;
  const Layout out_big = build_layout(space, big.out_mask());
  const Layout in_big = build_layout(space, big.in_mask());
  const Layout out_base = build_layout(space, base.out_mask());
  const Layout in_base = build_layout(space, base.in_mask());

  // factor position of each big-layout slot in the base layout (-1 = inserted)
  auto positions = [&](const Layout& bigl, const Layout& basel, std::vector<int>& map_base,
                       std::vector<int>& map_extra) {
    map_base.assign(bigl.pts.size(), -1);
    map_extra.assign(bigl.pts.size(), -1);
    std::size_t bi = 0;
    for (std::size_t i = 0; i < bigl.pts.size(); ++i) {
      if (bigl.pts[i] != -1 && chain_contains(extra, bigl.pts[i])) {
        for (std::size_t e = 0; e < extra_pts.size(); ++e)
          if (extra_pts[e] == bigl.pts[i]) map_extra[i] = static_cast<int>(e);
      } else {
        map_base[i] = static_cast<int>(bi++);
      }
    }
    (void)basel;
  };
  std::vector<int> out_map_base, out_map_extra, in_map_base, in_map_extra;
  positions(out_big, out_base, out_map_base, out_map_extra);
  positions(in_big, in_base, in_map_base, in_map_extra);

  Matrix result = Matrix::Zero(out_big.total, in_big.total);
  std::vector<int> rdig, cdig;
  for (int rr = 0; rr < out_big.total; ++rr) {
    decompose(out_big, rr, rdig);
    int rbase = 0;
    for (std::size_t i = 0; i < rdig.size(); ++i)
      if (out_map_base[i] >= 0) rbase += rdig[i] * out_base.strides[out_map_base[i]];
    for (int cc = 0; cc < in_big.total; ++cc) {
      decompose(in_big, cc, cdig);
      int cbase = 0;
      cplx factor = 1.0;
      for (std::size_t i = 0; i < cdig.size(); ++i)
        if (in_map_base[i] >= 0) cbase += cdig[i] * in_base.strides[in_map_base[i]];
      for (std::size_t i = 0; i < rdig.size(); ++i)
        if (out_map_extra[i] >= 0) {
          // locate the matching input digit of the same point
          int e = out_map_extra[i];
          int cd = -1;
          for (std::size_t j = 0; j < cdig.size(); ++j)
            if (in_map_extra[j] == e) cd = cdig[j];
          factor *= mats[e](rdig[i], cd);
        }
      result(rr, cc) = factor * block(rbase, cbase);
    }
  }
  return result;
}

nlohmann::ordered_json kernel_to_json(const Kernel& k) {
  const PointSpace& sp = k.space();
  nlohmann::ordered_json j;
  j["points"] = sp.size();
  j["initial_dim"] = sp.initial_dim();
  nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
  for (const auto& [key, b] : k.blocks()) {
    Table t = Table::from_key(key);
    std::string roles(sp.size(), '-');
    for (Role r : kRoles)
      for (int p : chain_indices(t[r])) roles[p] = role_char(r);
    nlohmann::ordered_json rec;
    rec["table"] = roles;
    rec["rows"] = b.rows();
    rec["cols"] = b.cols();
    std::vector<double> re, im;
    re.reserve(b.size());
    im.reserve(b.size());
    for (Eigen::Index r = 0; r < b.rows(); ++r)
      for (Eigen::Index c = 0; c < b.cols(); ++c) {
        re.push_back(b(r, c).real());
        im.push_back(b(r, c).imag());
      }
    rec["re"] = re;
    rec["im"] = im;
    blocks.push_back(std::move(rec));
  }
  j["blocks"] = std::move(blocks);
  return j;
}

Kernel kernel_from_json(const PointSpace& space, const nlohmann::json& j) {
  if (j.at("points").get<int>() != space.size() ||
      j.at("initial_dim").get<int>() != space.initial_dim())
    throw std::invalid_argument("serialized kernel does not match the space");
  Kernel k(space);
  for (const auto& rec : j.at("blocks")) {
    const std::string roles = rec.at("table").get<std::string>();
    if (static_cast<int>(roles.size()) != space.size())
      throw std::invalid_argument("bad table encoding length");
    Table t;
    for (int p = 0; p < space.size(); ++p)
      if (roles[p] != '-') t[role_from_char(roles[p])] |= chain_bit(p);
    const int rows = rec.at("rows").get<int>(), cols = rec.at("cols").get<int>();
    const auto& re = rec.at("re");
    const auto& im = rec.at("im");
    Matrix b(rows, cols);
    for (int r = 0, i = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c, ++i)
        b(r, c) = cplx(re.at(i).get<double>(), im.at(i).get<double>());
    k.set_block(t, std::move(b));
  }
  return k;
}

}  // namespace fockkit
