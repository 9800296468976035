// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fockkit/harness.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <thread>

namespace fockkit {

const std::vector<std::string> kSuiteNames = {
    "fubini",     "epsilon_adjoint", "epsilon_homomorphism", "meyer_mobius",
    "intertwining", "norms",         "lemma2",               "strong_ito",
    "weak_ito",   "q_adapted_ito",   "wiener"};

namespace {
const std::map<std::string, double> kDefaultTol = {
    {"fubini", 1e-12},       {"epsilon_adjoint", 1e-12}, {"epsilon_homomorphism", 1e-10},
    {"meyer_mobius", 1e-12}, {"intertwining", 1e-10},    {"norms", 1e-12},
    {"lemma2", 1e-12},       {"strong_ito", 1e-9},       {"weak_ito", 1e-9},
    {"q_adapted_ito", 1e-9}, {"wiener", 1e-9}};

double get_number(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  return j.get<double>();
}

int get_int(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError(field, "expected an integer");
  return j.get<int>();
}
}  // namespace

double HarnessConfig::tolerance(const std::string& suite, double fallback) const {
  auto it = tolerances.find(suite);
  return it != tolerances.end() ? it->second : fallback;
}

PointSpace HarnessConfig::make_space() const {
  std::vector<double> t = times;
  if (t.empty()) {
    t.resize(n_points);
    for (int i = 0; i < n_points; ++i) t[i] = horizon * (i + 1) / std::max(1, n_points);
  }
  std::vector<double> w = weights.empty() ? std::vector<double>{horizon / std::max(1, n_points)}
                                          : weights;
  if (static_cast<int>(w.size()) == 1) w.assign(n_points, w[0]);
  std::vector<int> d = multiplicities.empty() ? std::vector<int>{1} : multiplicities;
  if (static_cast<int>(d.size()) == 1) d.assign(n_points, d[0]);
  return PointSpace(std::move(t), std::move(w), std::move(d), initial_dim);
}

QField HarnessConfig::make_qfield(const PointSpace& space, std::uint64_t seed) const {
  if (q_field == "identity") return QField::identity(space);
  if (q_field == "zero") return QField::zero(space);
  if (q_field == "scalar") return QField::scalar(space, q_scalar);
  if (q_field == "projector") return random_projector_field(space, seed, q_rank);
  if (q_field == "random") return random_qfield(space, seed);
  throw ConfigError("q_field", "unknown kind '" + q_field + "'");
}

nlohmann::ordered_json HarnessConfig::echo() const {
  nlohmann::ordered_json j;
  j["n_points"] = n_points;
  j["horizon"] = horizon;
  j["times"] = times;
  j["weights"] = weights;
  j["multiplicities"] = multiplicities;
  j["initial_dim"] = initial_dim;
  j["seed_base"] = seed_base;
  j["seed_count"] = seed_count;
  j["suites"] = suites.empty() ? kSuiteNames : suites;
  j["q_field"] = q_field;
  j["q_scalar"] = q_scalar;
  j["q_rank"] = q_rank;
  j["density"] = density;
  j["magnitude"] = magnitude;
  j["integrand_pairs"] = integrand_pairs;
  j["max_degree"] = max_degree;
  j["tolerances"] = tolerances;
  j["format"] = format;
  return j;
}

HarnessConfig parse_config(const nlohmann::json& j) {
  static const std::vector<std::string> known = {
      "n_points",   "horizon",     "times",           "weights",   "multiplicities",
      "initial_dim", "seed_base",  "seed_count",      "suites",    "q_field",
      "q_scalar",   "q_rank",      "density",         "magnitude", "integrand_pairs",
      "max_degree", "tolerances",  "output",          "format",    "threads"};
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  for (const auto& [key, val] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError(key, "unknown field");

  HarnessConfig c;
  if (j.contains("n_points")) c.n_points = get_int(j["n_points"], "n_points");
  if (c.n_points < 0) throw ConfigError("n_points", "must be >= 0");
  if (j.contains("horizon")) c.horizon = get_number(j["horizon"], "horizon");
  if (!(c.horizon > 0)) throw ConfigError("horizon", "must be positive");
  if (j.contains("times")) {
    if (!j["times"].is_array()) throw ConfigError("times", "expected an array");
    c.times = j["times"].get<std::vector<double>>();
    if (static_cast<int>(c.times.size()) != c.n_points)
      throw ConfigError("times", "length must equal n_points");
  }
  auto broadcastable = [&](const char* field, auto& out) {
    using T = typename std::decay_t<decltype(out)>::value_type;
    const auto& v = j[field];
    if (v.is_array()) {
      out = v.template get<std::vector<T>>();
      if (static_cast<int>(out.size()) != c.n_points && out.size() != 1)
        throw ConfigError(field, "length must be 1 or n_points");
    } else if (v.is_number()) {
      out = {v.template get<T>()};
    } else {
      throw ConfigError(field, "expected a number or an array");
    }
  };
  if (j.contains("weights")) broadcastable("weights", c.weights);
  for (double w : c.weights)
    if (!(w > 0)) throw ConfigError("weights", "must be positive");
  if (j.contains("multiplicities")) broadcastable("multiplicities", c.multiplicities);
  for (int d : c.multiplicities)
    if (d < 1) throw ConfigError("multiplicities", "must be >= 1");
  if (j.contains("initial_dim")) c.initial_dim = get_int(j["initial_dim"], "initial_dim");
  if (c.initial_dim < 1) throw ConfigError("initial_dim", "must be >= 1");
  if (j.contains("seed_base")) c.seed_base = j["seed_base"].get<std::uint64_t>();
  if (j.contains("seed_count")) c.seed_count = get_int(j["seed_count"], "seed_count");
  if (c.seed_count < 1) throw ConfigError("seed_count", "must be >= 1");
  if (j.contains("suites")) {
    if (j["suites"].is_string() && j["suites"] == "all") {
      c.suites.clear();
    } else if (j["suites"].is_array()) {
      c.suites = j["suites"].get<std::vector<std::string>>();
      for (const auto& s : c.suites)
        if (std::find(kSuiteNames.begin(), kSuiteNames.end(), s) == kSuiteNames.end())
          throw ConfigError("suites", "unknown suite '" + s + "'");
    } else {
      throw ConfigError("suites", "expected \"all\" or an array of suite names");
    }
  }
  if (j.contains("q_field")) c.q_field = j["q_field"].get<std::string>();
  static const std::vector<std::string> qkinds = {"identity", "zero", "projector", "scalar",
                                                  "random"};
  if (std::find(qkinds.begin(), qkinds.end(), c.q_field) == qkinds.end())
    throw ConfigError("q_field", "unknown kind '" + c.q_field + "'");
  if (j.contains("q_scalar")) c.q_scalar = get_number(j["q_scalar"], "q_scalar");
  if (j.contains("q_rank")) c.q_rank = get_int(j["q_rank"], "q_rank");
  if (c.q_rank < 1) throw ConfigError("q_rank", "must be >= 1");
  if (j.contains("density")) c.density = get_number(j["density"], "density");
  if (!(c.density > 0 && c.density <= 1)) throw ConfigError("density", "must be in (0,1]");
  if (j.contains("magnitude")) c.magnitude = get_number(j["magnitude"], "magnitude");
  if (c.magnitude < 0) throw ConfigError("magnitude", "must be >= 0");
  if (j.contains("integrand_pairs")) c.integrand_pairs = get_int(j["integrand_pairs"], "integrand_pairs");
  if (c.integrand_pairs < 1) throw ConfigError("integrand_pairs", "must be >= 1");
  if (j.contains("max_degree")) c.max_degree = get_int(j["max_degree"], "max_degree");
  if (c.max_degree < 0) throw ConfigError("max_degree", "must be >= 0");
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) throw ConfigError("tolerances", "expected an object");
    for (const auto& [key, val] : j["tolerances"].items()) {
      if (std::find(kSuiteNames.begin(), kSuiteNames.end(), key) == kSuiteNames.end())
        throw ConfigError("tolerances", "unknown suite '" + key + "'");
      c.tolerances[key] = get_number(val, "tolerances." + key);
    }
  }
  if (j.contains("output")) c.output = j["output"].get<std::string>();
  if (j.contains("format")) c.format = j["format"].get<std::string>();
  if (c.format != "json" && c.format != "csv" && c.format != "table")
    throw ConfigError("format", "expected json, csv or table");
  if (j.contains("threads")) c.threads = get_int(j["threads"], "threads");
  if (c.threads < 0) throw ConfigError("threads", "must be >= 0");
  return c;
}

namespace {

ItoReport make_record(const std::string& suite, const std::string& name, std::uint64_t seed,
                      double residual, double tol, bool pass) {
  ItoReport r;
  r.suite = suite;
  r.name = name;
  r.seed = seed;
  r.residual = residual;
  r.tolerance = tol;
  r.pass = pass;
  return r;
}

ItoReport residual_record(const std::string& suite, const std::string& name, std::uint64_t seed,
                          double residual, double tol, double scale = 0.0) {
  return make_record(suite, name, seed, residual, tol, residual_within(residual, scale, tol));
}

Kernel random_subtable_kernel(const PointSpace& sp, std::uint64_t seed, double density,
                              double magnitude, ChainMask allowed) {
  Rng rng(seed);
  Kernel k(sp);
  for (const Table& t : enumerate_tables(sp)) {
    if (t.union_mask() & ~allowed) continue;
    if (!rng.bernoulli(density) || magnitude == 0.0) continue;
    Matrix b(block_rows(sp, t), block_cols(sp, t));
    for (Eigen::Index r = 0; r < b.rows(); ++r)
      for (Eigen::Index c = 0; c < b.cols(); ++c) b(r, c) = rng.disc(magnitude);
    k.set_block(t, b);
  }
  return k;
}

Vector truncated_random_vector(const FockBasis& basis, std::uint64_t seed, int max_degree) {
  Vector v = random_vector(basis, seed);
  for (ChainMask m : basis.chains())
    if (chain_size(m) > max_degree) v.segment(basis.offset(m), basis.block_dim(m)).setZero();
  return v;
}

/// Q = I adapted process driven by single-point integrands: every increment
/// is a pre-cut kernel spread over later gauge points by identity factors.
struct AdaptedSingleProcess {
  KernelProcess proc;
  PointIntegrand integrand;
};

AdaptedSingleProcess build_adapted_single(const PointSpace& sp, std::uint64_t seed,
                                          double density, double magnitude,
                                          const std::array<bool, 4>& roles) {
  const QField id = QField::identity(sp);
  Rng rng(seed);

  Kernel k0(sp);
  Matrix b0(sp.initial_dim(), sp.initial_dim());
  for (Eigen::Index r = 0; r < b0.rows(); ++r)
    for (Eigen::Index c = 0; c < b0.cols(); ++c) b0(r, c) = rng.disc(magnitude);
  k0.set_block(Table::empty(), b0);
  const Kernel t0 = mobius_transform(k0, id);

  PointIntegrand d(sp);
  for (int x = 0; x < sp.size(); ++x) {
    for (Role role : kRoles) {
      if (!roles[static_cast<int>(role)]) continue;
      const Kernel mu =
          random_subtable_kernel(sp, rng.raw(), density, magnitude, sp.prefix_mask(x));
      const Kernel spread = restrict_point_free(mobius_transform(mu, id), x);
      d.set(role, x, embed_point_scalar(spread, role, x));
    }
  }
  std::vector<Kernel> cuts;
  for (int k = 0; k <= sp.size(); ++k)
    cuts.push_back(t0 + single_counting_integral(d, sp.prefix_mask(k)));
  return {KernelProcess::from_kernels(sp, std::move(cuts)), std::move(d)};
}

// ---------------------------------------------------------------- suites --

std::vector<ItoReport> suite_fubini(const PointSpace& sp, const FockBasis&,
                                    const HarnessConfig& cfg, int idx) {
  const std::uint64_t s = derive_seed(cfg.seed_base, "fubini", idx);
  Rng rng(s);
  const std::size_t side = std::size_t(1) << sp.size();
  std::vector<cplx> vals(side * side);
  for (auto& v : vals) v = rng.disc(cfg.magnitude);
  const double res = fubini_residual(
      sp, [&](ChainMask u, ChainMask k) { return vals[std::size_t(u) * side + k]; });
  return {residual_record("fubini", "fubini", s, res, cfg.tolerance("fubini", 1e-12))};
}

std::vector<ItoReport> suite_epsilon_adjoint(const PointSpace& sp, const FockBasis& basis,
                                             const HarnessConfig& cfg, int idx) {
  const double tol = cfg.tolerance("epsilon_adjoint", 1e-12);
  const std::uint64_t s = derive_seed(cfg.seed_base, "epsilon_adjoint", idx);
  std::vector<ItoReport> out;
  const Kernel t = random_kernel(sp, s, cfg.density, cfg.magnitude);
  out.push_back(
      residual_record("epsilon_adjoint", "adjoint", s, epsilon_adjoint_residual(basis, t), tol));
  if (idx == 0) {
    const double unit_res = frobenius_distance(
        epsilon(basis, unit_kernel(sp)), Matrix::Identity(basis.dim(), basis.dim()));
    out.push_back(make_record("epsilon_adjoint", "unit_exact", s, unit_res, 0.0, unit_res == 0.0));
  }
  return out;
}

std::vector<ItoReport> suite_epsilon_homomorphism(const PointSpace& sp, const FockBasis& basis,
                                                  const HarnessConfig& cfg, int idx) {
  const double tol = cfg.tolerance("epsilon_homomorphism", 1e-10);
  const std::uint64_t s = derive_seed(cfg.seed_base, "epsilon_homomorphism", idx);
  const Kernel x = random_kernel(sp, derive_seed(s, "x", 0), cfg.density, cfg.magnitude);
  const Kernel y = random_kernel(sp, derive_seed(s, "y", 0), cfg.density, cfg.magnitude);
  std::vector<ItoReport> out;
  out.push_back(residual_record("epsilon_homomorphism", "product", s,
                                epsilon_homomorphism_residual(basis, x, y), tol));
  out.push_back(residual_record("epsilon_homomorphism", "star_pair", s,
                                epsilon_homomorphism_residual(basis, x, star_adjoint(x)), tol));
  return out;
}

std::vector<ItoReport> suite_meyer_mobius(const PointSpace& sp, const FockBasis&,
                                          const HarnessConfig& cfg, int idx) {
  const double tol = cfg.tolerance("meyer_mobius", 1e-12);
  const std::uint64_t s = derive_seed(cfg.seed_base, "meyer_mobius", idx);
  std::vector<ItoReport> out;

  const std::vector<std::pair<std::string, QField>> fields = {
      {"zero", QField::zero(sp)},
      {"identity", QField::identity(sp)},
      {"projector", random_projector_field(sp, derive_seed(s, "proj", 0), cfg.q_rank)},
      {"scalar2", QField::scalar(sp, 2.0)},
      {"random", random_qfield(sp, derive_seed(s, "qrand", 0))}};

  for (const auto& [kind, q] : fields) {
    const Kernel t = random_kernel(sp, derive_seed(s, "t_" + kind, 0), cfg.density, cfg.magnitude);
    const Kernel m = random_kernel(sp, derive_seed(s, "m_" + kind, 0), cfg.density, cfg.magnitude);
    const double r1 = kernel_distance(mobius_transform(meyer_transform(t, q), q), t);
    const double r2 = kernel_distance(meyer_transform(mobius_transform(m, q), q), m);

    const IntegrandKernel integ = tensor_q_integrand(
        random_kernel(sp, derive_seed(s, "p_" + kind, 0), cfg.density, cfg.magnitude), q);
    const KernelProcess proc = KernelProcess::from_integrand(integ);
    const QMeyerTransform qm = q_meyer_process_transform(proc, q);
    double r3 = 0.0;
    for (int k = 0; k < proc.cuts(); ++k)
      r3 = std::max(r3, kernel_distance(counting_integral(tensor_q_integrand(qm.at_cut[k], q),
                                                          sp.prefix_mask(k)),
                                        proc.at_cut(k)));
    ItoReport rec = residual_record("meyer_mobius", "roundtrip_" + kind, s, std::max({r1, r2, r3}),
                                    tol);
    rec.metrics = {{"kernel_roundtrip", r1},
                   {"integrand_roundtrip", r2},
                   {"process_roundtrip", r3},
                   {"time_dependent", qm.time_dependent ? 1.0 : 0.0}};
    out.push_back(rec);
  }

  // Integrands reproducing the same process differ by a null integrand.
  if (sp.size() >= 2) {
    const QField q = random_projector_field(sp, derive_seed(s, "proj", 0), cfg.q_rank);
    IntegrandKernel mp = tensor_q_integrand(
        random_kernel(sp, derive_seed(s, "null_m", 0), cfg.density, cfg.magnitude), q);
    const IntegrandKernel n = random_null_integrand(sp, derive_seed(s, "null", 0), cfg.magnitude);
    mp += n;
    const KernelProcess proc = KernelProcess::from_integrand(mp);
    const Kernel m_inf = meyer_transform(proc.at_cut(sp.size()), q);
    IntegrandKernel diff = mp;
    diff -= tensor_q_integrand(m_inf, q);
    const bool ok = is_null_integrand(n) && is_null_integrand(diff) && !is_null_integrand(mp);
    out.push_back(make_record("meyer_mobius", "null_decomposition", s, ok ? 0.0 : 1.0, 0.5, ok));
  }
  return out;
}

std::vector<ItoReport> suite_intertwining(const PointSpace& sp, const FockBasis& basis,
                                          const HarnessConfig& cfg, int idx) {
  const double tol = cfg.tolerance("intertwining", 1e-10);
  const std::uint64_t s = derive_seed(cfg.seed_base, "intertwining", idx);
  std::vector<ItoReport> out;

  const IntegrandKernel m =
      random_integrand(sp, derive_seed(s, "m", 0), cfg.integrand_pairs, cfg.magnitude);
  double r_diag = 0.0;
  for (int k = 0; k <= sp.size(); ++k) {
    const ChainMask pre = sp.prefix_mask(k);
    r_diag = std::max(r_diag, frobenius_distance(multiple_qs_integral(basis, m, pre),
                                                 multiple_qs_integral_direct(basis, m, pre)));
  }
  out.push_back(residual_record("intertwining", "diagram", s, r_diag, tol));

  PointIntegrand d(sp);
  IntegrandKernel m1(sp);
  for (int x = 0; x < sp.size(); ++x)
    for (Role role : kRoles) {
      const Kernel split = point_split(
          random_kernel(sp, derive_seed(s, "d", 8 * x + static_cast<int>(role)), cfg.density,
                        cfg.magnitude),
          role, x);
      d.set(role, x, split);
      for (const auto& [key, b] : split.blocks()) {
        Table rest = Table::from_key(key);
        rest[role] &= ~chain_bit(x);
        m1.add_block(Table::atomic(role, x), rest, b);
      }
    }
  double r_collapse = 0.0;
  for (int k = 0; k <= sp.size(); ++k)
    r_collapse =
        std::max(r_collapse, kernel_distance(counting_integral(m1, sp.prefix_mask(k)),
                                             single_counting_integral(d, sp.prefix_mask(k))));
  out.push_back(residual_record("intertwining", "single_collapse", s, r_collapse, tol));

  const double t_end = sp.size() ? sp.time(sp.size() - 1) + 1.0 : 1.0;
  Matrix sum = Matrix::Zero(basis.dim(), basis.dim());
  for (Role role : kRoles) sum += canonical_measure(basis, d, role, 0.0, t_end);
  const double r_measure = frobenius_distance(
      epsilon(basis, single_counting_integral(d, sp.full_mask())), sum);
  out.push_back(residual_record("intertwining", "canonical_measures", s, r_measure, tol));

  const double t_mid = t_end / 2;
  double r_add = 0.0;
  for (Role role : kRoles)
    r_add = std::max(
        r_add, frobenius_distance(canonical_measure(basis, d, role, 0.0, t_mid) +
                                      canonical_measure(basis, d, role, t_mid, t_end),
                                  canonical_measure(basis, d, role, 0.0, t_end)));
  out.push_back(residual_record("intertwining", "measure_additivity", s, r_add, tol));
  return out;
}

std::vector<ItoReport> suite_norms(const PointSpace& sp, const FockBasis& basis,
                                   const HarnessConfig& cfg, int idx) {
  const double slack_tol = cfg.tolerance("norms", 1e-12);
  const std::uint64_t s = derive_seed(cfg.seed_base, "norms", idx);
  std::vector<ItoReport> out;

  const Kernel t = random_kernel(sp, derive_seed(s, "t", 0), cfg.density, cfg.magnitude);
  const WeightFunction q = random_weight(sp, derive_seed(s, "q", 0), 1.0, 3.0);
  const WeightFunction r = random_weight(sp, derive_seed(s, "r", 0), 0.3, 2.0);
  WeightFunction p(sp.size());
  for (int i = 0; i < sp.size(); ++i) p[i] = q[i] + 1.0 / r[i];

  auto bound_record = [&](const std::string& name, double lhs, double rhs) {
    const double violation = std::max(0.0, lhs - rhs);
    ItoReport rec = make_record("norms", name, s, violation, slack_tol,
                                lhs <= rhs * (1.0 + 1e-12) + 1e-13);
    rec.metrics = {{"lhs", lhs}, {"rhs", rhs}, {"slack", rhs - lhs}};
    return rec;
  };

  const double proj = projective_norm(t, q, r);
  out.push_back(
      bound_record("representation_bound", weighted_operator_norm(basis, epsilon(basis, t), p),
                   proj));

  WeightQuadruple alpha = random_quadruple(sp, derive_seed(s, "alpha", 0), 0.2, 1.5);
  Rng arng(derive_seed(s, "ag", 0));
  for (int i = 0; i < sp.size(); ++i) alpha[Role::Gauge][i] = q[i] * arng.uniform(0.2, 1.0);
  out.push_back(bound_record("exponential_bound", proj,
                             exponential_bound(relative_norm(t, alpha), alpha, r, q, sp)));

  const Kernel x = random_kernel(sp, derive_seed(s, "x", 0), cfg.density, cfg.magnitude);
  const Kernel y = random_kernel(sp, derive_seed(s, "y", 0), cfg.density, cfg.magnitude);
  const WeightQuadruple a = random_quadruple(sp, derive_seed(s, "qa", 0), 0.2, 1.5);
  const WeightQuadruple g = random_quadruple(sp, derive_seed(s, "qg", 0), 0.2, 1.5);
  out.push_back(bound_record("product_submultiplicative",
                             relative_norm(kernel_product(x, y), quadruple_product(sp, a, g)),
                             relative_norm(x, a) * relative_norm(y, g)));
  return out;
}

std::vector<ItoReport> suite_lemma2(const PointSpace& sp, const FockBasis&,
                                    const HarnessConfig& cfg, int idx) {
  const std::uint64_t s = derive_seed(cfg.seed_base, "lemma2", idx);
  const IntegrandKernel m =
      random_integrand(sp, derive_seed(s, "m", 0), cfg.integrand_pairs, cfg.magnitude);
  const WeightQuadruple beta = random_quadruple(sp, derive_seed(s, "beta", 0), 0.2, 1.5);
  const WeightQuadruple gamma = random_quadruple(sp, derive_seed(s, "gamma", 0), 0.2, 1.5);
  std::vector<ItoReport> out;
  for (const auto& [name, pre] :
       std::vector<std::pair<std::string, ChainMask>>{{"half", sp.premask(cfg.horizon / 2)},
                                                      {"full", sp.full_mask()}}) {
    const Lemma2Report rep = lemma2_norm_bound(m, beta, gamma, pre);
    ItoReport rec = make_record("lemma2", name, s, std::max(0.0, rep.lhs - rep.c),
                                cfg.tolerance("lemma2", 1e-12), rep.hypothesis_ok && rep.pass);
    rec.metrics = {{"lhs", rep.lhs}, {"c", rep.c}};
    out.push_back(rec);
  }
  return out;
}

std::vector<ItoReport> suite_strong_ito(const PointSpace& sp, const FockBasis& basis,
                                        const HarnessConfig& cfg, int idx) {
  const double tol = cfg.tolerance("strong_ito", 1e-9);
  const std::uint64_t s = derive_seed(cfg.seed_base, "strong_ito", idx);
  const double t_end = cfg.horizon + 1.0;
  std::vector<ItoReport> out;

  const KernelProcess proc = KernelProcess::from_integrand(
      random_integrand(sp, derive_seed(s, "m", 0), cfg.integrand_pairs, cfg.magnitude));
  ItoReport rep = verify_strong_ito(basis, proc, t_end, tol);
  rep.name = "multiple_integral";
  rep.seed = s;
  out.push_back(rep);

  bool scalar_space = true;
  for (int i = 0; i < sp.size(); ++i) scalar_space &= sp.dim(i) == 1;
  if (scalar_space && sp.size() > 0) {
    const AdaptedSingleProcess ap = build_adapted_single(
        sp, derive_seed(s, "adapted", 0), cfg.density, cfg.magnitude, {true, true, true, true});
    ItoReport arep = verify_strong_ito(basis, ap.proc, t_end, tol);
    arep.name = "adapted_single";
    arep.seed = s;
    const bool adapted = is_q_adapted(ap.proc, QField::identity(sp)).adapted;
    arep.metrics["adapted"] = adapted ? 1.0 : 0.0;
    arep.pass = arep.pass && adapted;
    out.push_back(arep);
  }
  return out;
}

std::vector<ItoReport> suite_weak_ito(const PointSpace& sp, const FockBasis& basis,
                                      const HarnessConfig& cfg, int idx) {
  const double tol = cfg.tolerance("weak_ito", 1e-9);
  const std::uint64_t s = derive_seed(cfg.seed_base, "weak_ito", idx);
  const double t_end = cfg.horizon + 1.0;
  std::vector<ItoReport> out;

  const KernelProcess proc = KernelProcess::from_integrand(
      random_integrand(sp, derive_seed(s, "m", 0), cfg.integrand_pairs, cfg.magnitude));
  const Vector chi = random_vector(basis, derive_seed(s, "chi", 0));

  ItoReport rep = verify_weak_ito(basis, proc, t_end, chi, tol);
  rep.name = "weak";
  rep.seed = s;
  out.push_back(rep);

  ItoReport srep = verify_weak_ito(basis, star_process(proc), t_end, chi, tol);
  srep.name = "star_weak";
  srep.seed = s;
  out.push_back(srep);

  if (sp.size() > 0) {
    const double prop = proposition_table_residual(basis, proc, idx % sp.size());
    out.push_back(residual_record("weak_ito", "proposition_table", s, prop, 1e-10));
  }
  return out;
}

std::vector<ItoReport> suite_q_adapted(const PointSpace& sp, const FockBasis& basis,
                                       const HarnessConfig& cfg, int idx) {
  const double tol = cfg.tolerance("q_adapted_ito", 1e-9);
  const std::uint64_t s = derive_seed(cfg.seed_base, "q_adapted_ito", idx);
  const double t_end = cfg.horizon + 1.0;
  std::vector<ItoReport> out;

  const std::vector<std::pair<std::string, QField>> fields = {
      {"identity", QField::identity(sp)},
      {"projector", random_projector_field(sp, derive_seed(s, "proj", 0), cfg.q_rank)},
      {"scalar2", QField::scalar(sp, 2.0)}};

  const Vector chi = random_vector(basis, derive_seed(s, "chi", 0));
  for (const auto& [kind, q] : fields) {
    // keep a unit component so gauge tails are present at every seed
    Kernel mk = random_kernel(sp, derive_seed(s, "m_" + kind, 0), cfg.density, cfg.magnitude);
    mk += unit_kernel(sp);
    const IntegrandKernel integ = tensor_q_integrand(mk, q);
    const KernelProcess proc = KernelProcess::from_integrand(integ);

    const bool adapted = is_q_adapted(proc, q).adapted;
    out.push_back(
        make_record("q_adapted_ito", "adapted_predicate_" + kind, s, adapted ? 0.0 : 1.0, 0.5,
                    adapted));

    ItoReport rep = verify_q_adapted_ito(basis, proc, q, t_end, tol);
    rep.name = "ito_" + kind;
    rep.seed = s;
    out.push_back(rep);

    std::vector<Kernel> prod_cuts;
    for (int k = 0; k < proc.cuts(); ++k)
      prod_cuts.push_back(kernel_product(star_adjoint(proc.at_cut(k)), proc.at_cut(k)));
    const AdaptednessReport closure =
        is_q_adapted(KernelProcess::from_kernels(sp, std::move(prod_cuts)), q);
    // with no points there is nothing past any cut, so closure is vacuous
    const bool expect_closed = kind != "scalar2" || sp.size() == 0;
    ItoReport crec = make_record("q_adapted_ito", "product_closure_" + kind, s,
                                 closure.adapted == expect_closed ? 0.0 : 1.0, 0.5,
                                 closure.adapted == expect_closed);
    if (!closure.adapted) crec.note = "witness: " + std::to_string(closure.witness.key());
    out.push_back(crec);

    double qc = 0.0;
    for (int x = 0; x < sp.size(); ++x) {
      const FockBasis red(sp, x);
      qc = std::max(qc, q_commutator_residual(basis, red, proc.at_cut(x), q, x, chi));
    }
    out.push_back(residual_record("q_adapted_ito", "q_commutator_" + kind, s, qc, 1e-10));
  }
  return out;
}

std::vector<ItoReport> suite_wiener(const PointSpace& sp, const FockBasis& basis,
                                    const HarnessConfig& cfg, int idx) {
  const double tol = cfg.tolerance("wiener", 1e-9);
  const std::uint64_t s = derive_seed(cfg.seed_base, "wiener", idx);
  std::vector<ItoReport> out;

  for (int i = 0; i < sp.size(); ++i)
    if (sp.dim(i) != 1) {
      ItoReport rec = make_record("wiener", "scalar_case", s, 0.0, tol, true);
      rec.skipped = true;
      rec.note = "requires multiplicity 1 at every point";
      return {rec};
    }

  std::map<int, Kernel> dks;
  Kernel t0 = random_kernel(sp, derive_seed(s, "t0", 0), cfg.density, cfg.magnitude);
  std::vector<Kernel> cuts{t0};
  for (int x = 0; x < sp.size(); ++x) {
    dks.emplace(x, random_point_free_kernel(sp, derive_seed(s, "d", x), cfg.density,
                                            cfg.magnitude, x));
    Kernel next = cuts.back();
    next += embed_point_scalar(dks.at(x), Role::Ann, x);
    next += embed_point_scalar(dks.at(x), Role::Cre, x);
    cuts.push_back(std::move(next));
  }
  const KernelProcess proc = KernelProcess::from_kernels(sp, std::move(cuts));
  const Vector chi = truncated_random_vector(basis, derive_seed(s, "chi", 0), cfg.max_degree);

  const WienerChecks c = wiener_checks(basis, proc, dks, chi);
  out.push_back(residual_record("wiener", "window_commutators", s, c.commutator_residual, 1e-12));
  out.push_back(residual_record("wiener", "ito_term", s, c.ito_term_residual, tol));
  ItoReport drec = residual_record("wiener", "decomposition", s, c.decomposition_residual, tol);
  drec.metrics = {{"partial_term_max", c.partial_term_max},
                  {"correction_term_max", c.correction_term_max}};
  out.push_back(drec);

  if (sp.size() > 0) {
    const AdaptedSingleProcess ap = build_adapted_single(
        sp, derive_seed(s, "adapted", 0), cfg.density, cfg.magnitude, {false, true, false, false});
    // reuse the annihilation-leg kernels on both legs
    std::map<int, Kernel> adks;
    std::vector<Kernel> acuts{ap.proc.at_cut(0)};
    for (int x = 0; x < sp.size(); ++x) {
      Kernel base(sp);
      if (const Kernel* k = ap.integrand.get(Role::Ann, x)) {
        for (const auto& [key, b] : k->blocks()) {
          Table t = Table::from_key(key);
          t[Role::Ann] &= ~chain_bit(x);
          base.add_block(t, b);
        }
      }
      adks.emplace(x, base);
      Kernel next = acuts.back();
      next += embed_point_scalar(base, Role::Ann, x);
      next += embed_point_scalar(base, Role::Cre, x);
      acuts.push_back(std::move(next));
    }
    const KernelProcess aproc = KernelProcess::from_kernels(sp, std::move(acuts));
    const WienerChecks ac = wiener_checks(basis, aproc, adks, chi);
    ItoReport arec = residual_record("wiener", "adapted_partial", s, ac.partial_term_max, 1e-10);
    arec.metrics = {{"decomposition", ac.decomposition_residual},
                    {"correction_term_max", ac.correction_term_max}};
    arec.pass = arec.pass && residual_within(ac.decomposition_residual, 0.0, tol);
    out.push_back(arec);
  }
  return out;
}

using SuiteFn = std::vector<ItoReport> (*)(const PointSpace&, const FockBasis&,
                                           const HarnessConfig&, int);

SuiteFn suite_fn(const std::string& name) {
  if (name == "fubini") return suite_fubini;
  if (name == "epsilon_adjoint") return suite_epsilon_adjoint;
  if (name == "epsilon_homomorphism") return suite_epsilon_homomorphism;
  if (name == "meyer_mobius") return suite_meyer_mobius;
  if (name == "intertwining") return suite_intertwining;
  if (name == "norms") return suite_norms;
  if (name == "lemma2") return suite_lemma2;
  if (name == "strong_ito") return suite_strong_ito;
  if (name == "weak_ito") return suite_weak_ito;
  if (name == "q_adapted_ito") return suite_q_adapted;
  if (name == "wiener") return suite_wiener;
  throw ConfigError("suites", "unknown suite '" + name + "'");
}

int resolve_threads(const HarnessConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("FOCKKIT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(8u, hw ? hw : 1u));
}

template <typename F>
void parallel_for(int count, int threads, F&& fn) {
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

RunReport run(const HarnessConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  const PointSpace space = cfg.make_space();
  const FockBasis basis(space);
  const std::vector<std::string> suites = cfg.suites.empty() ? kSuiteNames : cfg.suites;
  const int threads = resolve_threads(cfg);

  RunReport report;
  report.config_echo = cfg.echo();
  for (const std::string& name : suites) {
    const auto s_start = std::chrono::steady_clock::now();
    SuiteResult sr;
    sr.name = name;
    SuiteFn fn = suite_fn(name);
    std::vector<std::vector<ItoReport>> per_seed(cfg.seed_count);
    parallel_for(cfg.seed_count, threads,
                 [&](int i) { per_seed[i] = fn(space, basis, cfg, i); });
    for (auto& recs : per_seed)
      for (auto& r : recs) {
        r.suite = name;
        sr.pass = sr.pass && (r.pass || r.skipped);
        sr.records.push_back(std::move(r));
      }
    sr.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - s_start).count();
    report.pass = report.pass && sr.pass;
    report.suites.push_back(std::move(sr));
  }
  report.total_runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

nlohmann::ordered_json report_to_json(const RunReport& r, bool include_runtime) {
  nlohmann::ordered_json j;
  j["config"] = r.config_echo;
  j["pass"] = r.pass;
  if (include_runtime) j["total_runtime_seconds"] = r.total_runtime_seconds;
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  for (const auto& s : r.suites) {
    nlohmann::ordered_json js;
    js["suite"] = s.name;
    js["pass"] = s.pass;
    if (include_runtime) js["runtime_seconds"] = s.runtime_seconds;
    nlohmann::ordered_json recs = nlohmann::ordered_json::array();
    for (const auto& rec : s.records) {
      nlohmann::ordered_json jr;
      jr["name"] = rec.name;
      jr["seed"] = rec.seed;
      jr["residual"] = rec.residual;
      jr["tolerance"] = rec.tolerance;
      jr["pass"] = rec.pass;
      if (rec.skipped) jr["skipped"] = true;
      if (!rec.note.empty()) jr["note"] = rec.note;
      if (!rec.metrics.empty()) jr["metrics"] = rec.metrics;
      recs.push_back(std::move(jr));
    }
    js["records"] = std::move(recs);
    suites.push_back(std::move(js));
  }
  j["suites"] = std::move(suites);
  return j;
}

void emit(const RunReport& r, const std::string& format, std::ostream& os) {
  if (format == "json") {
    os << report_to_json(r).dump(2) << "\n";
    return;
  }
  if (format == "csv") {
    os << "suite,name,seed,residual,tolerance,pass,skipped\n";
    for (const auto& s : r.suites)
      for (const auto& rec : s.records)
        os << s.name << ',' << rec.name << ',' << rec.seed << ','
           << std::setprecision(17) << rec.residual << ',' << rec.tolerance << ','
           << (rec.pass ? "true" : "false") << ',' << (rec.skipped ? "true" : "false") << "\n";
    return;
  }
  if (format == "table") {
    os << std::left << std::setw(24) << "suite" << std::setw(10) << "records" << std::setw(14)
       << "max residual" << std::setw(8) << "pass"
       << "runtime\n";
    for (const auto& s : r.suites) {
      double worst = 0.0;
      for (const auto& rec : s.records) worst = std::max(worst, rec.residual);
      os << std::left << std::setw(24) << s.name << std::setw(10) << s.records.size()
         << std::setw(14) << std::setprecision(3) << std::scientific << worst << std::setw(8)
         << (s.pass ? "ok" : "FAIL") << std::defaultfloat << s.runtime_seconds << "s\n";
      for (const auto& rec : s.records)
        if (!rec.pass && !rec.skipped)
          os << "  FAIL " << rec.name << " seed=" << rec.seed << " residual=" << rec.residual
             << " tol=" << rec.tolerance << "\n";
    }
    os << (r.pass ? "PASS" : "FAIL") << " total " << r.total_runtime_seconds << "s\n";
    return;
  }
  throw std::invalid_argument("unknown report format: " + format);
}

void emit_to_path(const RunReport& r, const std::string& format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output path: " + path);
  emit(r, format, out);
}

}  // namespace fockkit
