#include <pybind11/pybind11.h>

#include "qflag/rootdata.hpp"

namespace py = pybind11;
using namespace qflag;

PYBIND11_MODULE(_qflag, m) {
  m.doc() = "quantized flag manifold toolkit";

  py::class_<RootSystem, std::shared_ptr<RootSystem>>(m, "RootSystem")
      .def_readonly("rank", &RootSystem::rank)
      .def_property_readonly("type",
                             [](const RootSystem& rs) { return std::string(1, rs.type_letter); })
      .def_property_readonly("positive_root_count",
                             [](const RootSystem& rs) { return rs.positive_roots.size(); })
      .def("__repr__", [](const RootSystem& rs) {
        return std::string(1, rs.type_letter) + std::to_string(rs.rank);
      });

  m.def("root_system", [](const std::string& t, int l) {
    if (t.size() != 1) throw std::invalid_argument("type letter");
    return std::const_pointer_cast<RootSystem>(build_root_system(t[0], l));
  });
}
