// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fockkit/harness.hpp"

namespace py = pybind11;
using namespace fockkit;

namespace {

Table table_from_roles(const PointSpace& sp, const std::string& roles) {
  if (static_cast<int>(roles.size()) != sp.size())
    throw std::invalid_argument("role string length must equal the point count");
  Table t;
  for (int p = 0; p < sp.size(); ++p)
    if (roles[p] != '-') t[role_from_char(roles[p])] |= chain_bit(p);
  return t;
}

QField qfield_from_spec(const PointSpace& sp, const std::string& kind, cplx scalar,
                        std::uint64_t seed, int rank) {
  if (kind == "identity") return QField::identity(sp);
  if (kind == "zero") return QField::zero(sp);
  if (kind == "scalar") return QField::scalar(sp, scalar);
  if (kind == "projector") return random_projector_field(sp, seed, rank);
  if (kind == "random") return random_qfield(sp, seed);
  throw std::invalid_argument("unknown Q field kind: " + kind);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "finite Guichardet-Fock kernel calculus";

  py::class_<PointSpace>(m, "PointSpace")
      .def(py::init<std::vector<double>, std::vector<double>, std::vector<int>, int>(),
           py::arg("times"), py::arg("weights"), py::arg("multiplicities"),
           py::arg("initial_dim"))
      .def_static("uniform", &PointSpace::uniform, py::arg("n"), py::arg("horizon"),
                  py::arg("multiplicity") = 1, py::arg("initial_dim") = 1)
      .def_property_readonly("size", &PointSpace::size)
      .def_property_readonly("initial_dim", &PointSpace::initial_dim)
      .def("time", &PointSpace::time)
      .def("weight", &PointSpace::weight)
      .def("dim", &PointSpace::dim);

  py::class_<FockBasis>(m, "FockBasis")
      .def(py::init<const PointSpace&>(), py::keep_alive<1, 2>())
      .def_property_readonly("dim", &FockBasis::dim);

  py::class_<QField>(m, "QField");
  m.def("qfield", &qfield_from_spec, py::arg("space"), py::arg("kind"),
        py::arg("scalar") = cplx(2.0, 0.0), py::arg("seed") = 0, py::arg("rank") = 1);

  py::class_<Kernel>(m, "Kernel")
      .def(py::init<const PointSpace&>(), py::keep_alive<1, 2>())
      .def_property_readonly("support_size", &Kernel::support_size)
      .def("set_block",
           [](Kernel& k, const std::string& roles, const Matrix& b) {
             k.set_block(table_from_roles(k.space(), roles), b);
           })
      .def("block",
           [](const Kernel& k, const std::string& roles) -> py::object {
             const Matrix* b = k.block(table_from_roles(k.space(), roles));
             return b ? py::cast(*b) : py::none();
           })
      .def("to_json", [](const Kernel& k) { return kernel_to_json(k).dump(); })
      .def("__add__", [](const Kernel& a, const Kernel& b) { return Kernel(a) += b; })
      .def("__sub__", [](const Kernel& a, const Kernel& b) { return Kernel(a) -= b; })
      .def("__rmul__", [](const Kernel& a, cplx c) { return c * Kernel(a); });

  m.def("kernel_from_json", [](const PointSpace& sp, const std::string& text) {
    return kernel_from_json(sp, nlohmann::json::parse(text));
  }, py::keep_alive<0, 1>());

  m.def("unit_kernel", &unit_kernel, py::keep_alive<0, 1>());
  m.def("random_kernel", &random_kernel, py::arg("space"), py::arg("seed"),
        py::arg("density") = 0.5, py::arg("magnitude") = 1.0, py::keep_alive<0, 1>());
  m.def("star_adjoint", &star_adjoint, py::keep_alive<0, 1>());
  m.def("kernel_product", &kernel_product, py::keep_alive<0, 1>());
  m.def("kernel_distance", &kernel_distance);

  m.def("epsilon", &epsilon);
  m.def("epsilon_adjoint_residual", &epsilon_adjoint_residual);
  m.def("epsilon_homomorphism_residual", &epsilon_homomorphism_residual);

  m.def("meyer_transform", &meyer_transform, py::keep_alive<0, 1>());
  m.def("mobius_transform", &mobius_transform, py::keep_alive<0, 1>());

  m.def("relative_norm",
        [](const Kernel& k, std::array<std::vector<double>, 4> comps) {
          WeightQuadruple q;
          q.comp = std::move(comps);
          return relative_norm(k, q);
        });
  m.def("projective_norm", &projective_norm);
  m.def("weighted_operator_norm", &weighted_operator_norm);

  m.def("verify_strong_ito",
        [](const FockBasis& basis, const Kernel& mkernel, const QField& q, double t) {
          const KernelProcess proc =
              KernelProcess::from_integrand(tensor_q_integrand(mkernel, q));
          const ItoReport rep = verify_strong_ito(basis, proc, t);
          return py::make_tuple(rep.residual, rep.pass);
        },
        "strong product formula residual for the process generated by M (x) Q");

  m.def("run_harness", [](const std::string& config_json, const std::string& format) {
    const HarnessConfig cfg = parse_config(nlohmann::json::parse(config_json));
    const RunReport rep = run(cfg);
    if (format == "json") return report_to_json(rep).dump(2);
    std::ostringstream os;
    emit(rep, format, os);
    return os.str();
  }, py::arg("config_json"), py::arg("format") = "json");

  m.def("suite_names", [] { return kSuiteNames; });
}
