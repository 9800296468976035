// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>
#include <string_view>

#include "fockkit/calculus.hpp"

namespace fockkit {

/// Seeded generator with explicit bit-to-double conversion so a fixed seed
/// yields the same stream everywhere the engine sequence is standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() { return double(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  int uniform_int(int lo, int hi);  // inclusive bounds
  bool bernoulli(double p) { return uniform01() < p; }
  /// Uniform on the closed disc of the given radius.
  cplx disc(double radius);
  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

/// Stream-isolated seed for (base, suite tag, index).
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index);

/// Reproducible sparse kernel: each table kept with probability `density`,
/// block entries uniform on the disc of radius `magnitude`.
Kernel random_kernel(const PointSpace& space, std::uint64_t seed, double density,
                     double magnitude);

/// Kernel supported on tables avoiding point x.
Kernel random_point_free_kernel(const PointSpace& space, std::uint64_t seed, double density,
                                double magnitude, int x);

/// Sparse integrand: `pairs` random disjoint table pairs with disc entries.
IntegrandKernel random_integrand(const PointSpace& space, std::uint64_t seed, int pairs,
                                 double magnitude);

Vector random_vector(const FockBasis& basis, std::uint64_t seed, double magnitude = 1.0);

/// Positive weights uniform on [lo, hi].
WeightFunction random_weight(const PointSpace& space, std::uint64_t seed, double lo, double hi);

WeightQuadruple random_quadruple(const PointSpace& space, std::uint64_t seed, double lo,
                                 double hi);

/// Rank-r orthogonal projector field from seeded unitary frames.
QField random_projector_field(const PointSpace& space, std::uint64_t seed, int rank);

QField random_qfield(const PointSpace& space, std::uint64_t seed, double magnitude = 1.0);

/// Integrand supported on gauge-only second tables, i.e. of the form
/// M tensor Q for a seeded sparse M; its counting integrals are Q-adapted.
IntegrandKernel random_q_integrand(const PointSpace& space, std::uint64_t seed, double density,
                                   double magnitude, const QField& q);

/// A null integrand built from cancelling two-point prefix patterns; its
/// counting integral vanishes at every cut.
IntegrandKernel random_null_integrand(const PointSpace& space, std::uint64_t seed,
                                      double magnitude);

}  // namespace fockkit
