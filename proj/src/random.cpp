// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fockkit/random.hpp"

#include <Eigen/QR>
#include <cmath>
#include <numbers>

namespace fockkit {

namespace {
std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

Matrix random_block(Rng& rng, int rows, int cols, double magnitude) {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.disc(magnitude);
  return m;
}
}  // namespace

int Rng::uniform_int(int lo, int hi) {
  return lo + static_cast<int>(uniform01() * (hi - lo + 1.0)) % (hi - lo + 1);
}

cplx Rng::disc(double radius) {
  const double r = radius * std::sqrt(uniform01());
  const double phi = 2.0 * std::numbers::pi * uniform01();
  return {r * std::cos(phi), r * std::sin(phi)};
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(fnv1a(tag)) ^ splitmix64(index * 0x9e3779b97f4a7c15ull));
}

Kernel random_kernel(const PointSpace& space, std::uint64_t seed, double density,
                     double magnitude) {
  if (!(density > 0.0 && density <= 1.0)) throw std::invalid_argument("density must be in (0,1]");
  Rng rng(seed);
  Kernel k(space);
  for (const Table& t : enumerate_tables(space)) {
    if (!rng.bernoulli(density)) continue;
    if (magnitude == 0.0) continue;
    k.set_block(t, random_block(rng, block_rows(space, t), block_cols(space, t), magnitude));
  }
  return k;
}

Kernel random_point_free_kernel(const PointSpace& space, std::uint64_t seed, double density,
                                double magnitude, int x) {
  Rng rng(seed);
  Kernel k(space);
  for (const Table& t : enumerate_tables(space)) {
    if (t.contains(x)) continue;
    if (!rng.bernoulli(density) || magnitude == 0.0) continue;
    k.set_block(t, random_block(rng, block_rows(space, t), block_cols(space, t), magnitude));
  }
  return k;
}

IntegrandKernel random_integrand(const PointSpace& space, std::uint64_t seed, int pairs,
                                 double magnitude) {
  Rng rng(seed);
  IntegrandKernel m(space);
  const int n = space.size();
  for (int i = 0; i < pairs; ++i) {
    Table u, k;
    for (int p = 0; p < n; ++p) {
      const int digit = rng.uniform_int(0, 4);
      if (digit == 0) continue;
      const Role r = static_cast<Role>(digit - 1);
      (rng.bernoulli(0.5) ? u : k)[r] |= chain_bit(p);
    }
    Table whole;
    for (int s = 0; s < 4; ++s) whole.slot[s] = u.slot[s] | k.slot[s];
    m.add_block(u, k,
                random_block(rng, block_rows(space, whole), block_cols(space, whole), magnitude));
  }
  return m;
}

Vector random_vector(const FockBasis& basis, std::uint64_t seed, double magnitude) {
  Rng rng(seed);
  Vector v(basis.dim());
  for (int i = 0; i < basis.dim(); ++i) v[i] = rng.disc(magnitude);
  return v;
}

WeightFunction random_weight(const PointSpace& space, std::uint64_t seed, double lo, double hi) {
  Rng rng(seed);
  WeightFunction w(space.size());
  for (auto& v : w) v = rng.uniform(lo, hi);
  return w;
}

WeightQuadruple random_quadruple(const PointSpace& space, std::uint64_t seed, double lo,
                                 double hi) {
  Rng rng(seed);
  WeightQuadruple q = WeightQuadruple::constant(space, 0, 0, 0, 0);
  for (Role r : kRoles)
    for (int i = 0; i < space.size(); ++i) q[r][i] = rng.uniform(lo, hi);
  return q;
}

QField random_projector_field(const PointSpace& space, std::uint64_t seed, int rank) {
  Rng rng(seed);
  QField f;
  for (int i = 0; i < space.size(); ++i) {
    const int d = space.dim(i);
    const int r = std::min(rank, d);
    Matrix g = random_block(rng, d, d, 1.0) + 0.1 * Matrix::Identity(d, d);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix u = Matrix(qr.householderQ()).leftCols(r);
    f.q.push_back(u * u.adjoint());
  }
  return f;
}

QField random_qfield(const PointSpace& space, std::uint64_t seed, double magnitude) {
  Rng rng(seed);
  QField f;
  for (int i = 0; i < space.size(); ++i)
    f.q.push_back(random_block(rng, space.dim(i), space.dim(i), magnitude));
  return f;
}

IntegrandKernel random_q_integrand(const PointSpace& space, std::uint64_t seed, double density,
                                   double magnitude, const QField& q) {
  return tensor_q_integrand(random_kernel(space, seed, density, magnitude), q);
}

IntegrandKernel random_null_integrand(const PointSpace& space, std::uint64_t seed,
                                      double magnitude) {
  Rng rng(seed);
  IntegrandKernel m(space);
  const int n = space.size();
  if (n < 2) return m;
  for (int rep = 0; rep < 3; ++rep) {
    Table whole;
    int npts = 0;
    for (int p = 0; p < n; ++p) {
      const int digit = rng.uniform_int(0, 4);
      if (digit == 0) continue;
      whole.slot[digit - 1] |= chain_bit(p);
      ++npts;
    }
    if (npts < 2) {
      --rep;
      continue;
    }
    const auto pts = chain_indices(whole.union_mask());
    const int x1 = pts[pts.size() - 2], x2 = pts[pts.size() - 1];
    const Matrix b = random_block(rng, block_rows(space, whole), block_cols(space, whole),
                                  magnitude);
    // The two prefix sums through x2 cancel at every cut.
    const Table u1 = whole.restricted(chain_bit(x2));
    const Table u2 = whole.restricted(chain_bit(x1) | chain_bit(x2));
    m.add_block(u1, whole.restricted(~chain_bit(x2)), b);
    m.add_block(u2, whole.restricted(~(chain_bit(x1) | chain_bit(x2))), -b);
  }
  return m;
}

}  // namespace fockkit
