// Python bindings: scenarios, elements, patterns, the canonical valuation and
// the check runner. Reports come back as plain dicts.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <limits>

#include "gradval/error.hpp"
#include "gradval/graded.hpp"
#include "gradval/pattern.hpp"
#include "gradval/scenario.hpp"
#include "gradval/value.hpp"

namespace py = pybind11;
using namespace gradval;

namespace {

py::object bound_to_py(const ExtInt& b) {
  if (b.is_pos_inf()) return py::float_(std::numeric_limits<double>::infinity());
  if (b.is_neg_inf()) return py::float_(-std::numeric_limits<double>::infinity());
  return py::int_(b.value());
}

ExtInt bound_from_py(const py::handle& h) {
  if (py::isinstance<py::int_>(h)) return ExtInt(h.cast<std::int64_t>());
  if (py::isinstance<py::float_>(h)) {
    const double d = h.cast<double>();
    if (d == std::numeric_limits<double>::infinity()) return ExtInt::pos_inf();
    if (d == -std::numeric_limits<double>::infinity()) return ExtInt::neg_inf();
  }
  if (py::isinstance<py::str>(h)) {
    if (auto b = ExtInt::parse(h.cast<std::string>())) return *b;
  }
  throw py::value_error("bound must be an int, +-inf or a string such as \"-inf\"");
}

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

// name -> bound, in groupoid order
py::dict bounds_dict(const BoundPattern& p) {
  py::dict d;
  const auto& g = p.parent()->groupoid();
  for (Index i = 0; i < p.size(); ++i) d[py::str(g.name(i))] = bound_to_py(p.bound(i));
  return d;
}

std::vector<ExtInt> bounds_vector(const QPtr& q, const py::dict& d) {
  const auto& g = q->groupoid();
  std::vector<ExtInt> out(g.size(), ExtInt::pos_inf());
  for (auto [k, v] : d) out[g.index_of(k.cast<std::string>())] = bound_from_py(v);
  return out;
}

RunOptions make_options(std::uint64_t seed, int window, bool slow, std::vector<std::string> only) {
  RunOptions o;
  o.seed = seed;
  o.window = window;
  o.slow = slow;
  o.only = std::move(only);
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Valuations on groupoid-graded skewfields.";
  m.attr("__version__") = kVersion;

  static PyObject* error_type = PyErr_NewException("gradval._core.GradvalError", PyExc_RuntimeError, nullptr);
  m.attr("GradvalError") = py::handle(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
      inst.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type, inst.ptr());
    }
  });

  py::class_<GSkewfield, std::shared_ptr<GSkewfield>>(m, "Skewfield")
      .def_property_readonly("field", [](const GSkewfield& q) { return q.field().to_string(); })
      .def_property_readonly("names", [](const GSkewfield& q) { return q.groupoid().names(); })
      .def_property_readonly("idempotents",
                             [](const GSkewfield& q) {
                               std::vector<std::string> out;
                               for (Index e : q.groupoid().idempotents()) out.push_back(q.groupoid().name(e));
                               return out;
                             })
      .def("__len__", &GSkewfield::size)
      .def("is_g_simple", [](const GSkewfield& q) { return is_g_simple(q); })
      .def("is_strong", [](const GSkewfield& q) { return is_strong(q); });

  py::class_<GradedElement>(m, "Element")
      .def_property_readonly("coefficients",
                             [](const GradedElement& x) {
                               py::dict d;
                               const auto& g = x.parent()->groupoid();
                               for (const auto& [i, c] : x.coefficients()) d[py::str(g.name(i))] = c.to_string();
                               return d;
                             })
      .def_property_readonly("degree",
                             [](const GradedElement& x) -> std::optional<std::string> {
                               if (auto d = x.degree()) return x.parent()->groupoid().name(*d);
                               return std::nullopt;
                             })
      .def("is_zero", &GradedElement::is_zero)
      .def("is_homogeneous", &GradedElement::is_homogeneous)
      .def("g_inverse", [](const GradedElement& x) { return g_inverse(x); })
      .def("source_target", [](const GradedElement& x) { return source_target(x); })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def(py::self != py::self)
      .def("__str__", &GradedElement::to_string)
      .def("__repr__", [](const GradedElement& x) { return "<Element " + x.to_string() + ">"; });

  py::class_<BoundPattern>(m, "Pattern")
      .def_property_readonly("bounds", &bounds_dict)
      .def_property_readonly("kind", [](const BoundPattern& p) { return to_string(p.kind()); })
      .def("contains", &BoundPattern::contains)
      .def("__contains__", &BoundPattern::contains)
      .def("is_valid", [](const BoundPattern& p) { return validate_pattern(p).pass; })
      .def("is_g_total", [](const BoundPattern& p) { return is_g_total(p); })
      .def("is_g_stable", [](const BoundPattern& p) { return is_g_stable(p); })
      .def("is_g_valuation_ring", [](const BoundPattern& p) { return is_g_valuation_ring(p); })
      .def("is_strongly_graded", [](const BoundPattern& p) { return is_strongly_graded(p); })
      .def("positives", [](const BoundPattern& p) { return positives(p).ideal; })
      .def("jacobson_radical", [](const BoundPattern& p) { return g_jacobson_radical(p); })
      .def(
          "ideal",
          [](const BoundPattern& ring, const std::vector<GradedElement>& gens, const std::string& side) {
            Side s = Side::TwoSided;
            if (side == "left") {
              s = Side::Left;
            } else if (side == "right") {
              s = Side::Right;
            } else if (side != "two-sided") {
              throw py::value_error("side must be left, right or two-sided");
            }
            return generated_ideal(ring, gens, s);
          },
          py::arg("generators"), py::arg("side") = "two-sided")
      .def("__str__", &BoundPattern::to_string)
      .def("__repr__", [](const BoundPattern& p) { return "<Pattern " + p.to_string() + ">"; });

  m.def(
      "subring",
      [](const std::shared_ptr<GSkewfield>& q, const py::dict& bounds) {
        QPtr c = q;
        return BoundPattern::subring(c, bounds_vector(c, bounds));
      },
      py::arg("skewfield"), py::arg("bounds"), "Subring pattern from {name: bound}; missing names get +inf.");

  py::class_<CanonicalValuation>(m, "Valuation")
      .def(py::init<const BoundPattern&>(), py::arg("ring"))
      .def("value", [](const CanonicalValuation& v, const GradedElement& x) { return v.render(v.value(x)); })
      .def("ge",
           [](const CanonicalValuation& v, const GradedElement& x, const GradedElement& y) {
             return v.ge(v.value(x), v.value(y));
           })
      .def_property_readonly("gbar_classes",
                             [](const CanonicalValuation& v) {
                               std::vector<std::vector<std::string>> out;
                               for (const auto& cls : v.gbar_classes()) {
                                 auto& row = out.emplace_back();
                                 for (Index g : cls) row.push_back(v.parent()->groupoid().name(g));
                               }
                               return out;
                             })
      .def_property_readonly("gamma_idempotents",
                             [](const CanonicalValuation& v) {
                               std::vector<std::string> out;
                               for (const auto& e : v.gamma_idempotents()) out.push_back(v.render(e));
                               return out;
                             })
      .def("gamma_is_group", [](const CanonicalValuation& v) { return v.gamma_idempotents().size() == 1; });

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("id", &Scenario::id)
      .def_readonly("title", &Scenario::title)
      .def_readonly("anchor", &Scenario::anchor)
      .def_readonly("checks", &Scenario::checks)
      .def_property_readonly("skewfield", [](const Scenario& s) { return std::const_pointer_cast<GSkewfield>(s.q); })
      .def_readonly("subring", &Scenario::subring)
      .def_property_readonly("ideals",
                             [](const Scenario& s) {
                               py::dict d;
                               for (const auto& [n, p] : s.ideals) d[py::str(n)] = p;
                               return d;
                             })
      .def_property_readonly("elements",
                             [](const Scenario& s) {
                               py::dict d;
                               for (const auto& [n, x] : s.elements) d[py::str(n)] = x;
                               return d;
                             })
      .def_property_readonly("expect", [](const Scenario& s) { return json_to_py(s.expect); })
      .def("element", [](const Scenario& s, const std::string& text) { return GradedElement::parse(s.q, text); },
           py::arg("text"), "Parses an element such as \"3/2*e12 + e21\".");

  m.def("load", &load_scenario, py::arg("path"));
  m.def("parse", &parse_scenario, py::arg("text"), py::arg("source_name") = "<string>");
  m.def("all_checks", &all_checks);
  m.def("examples", &reproducible_examples);
  m.def(
      "check",
      [](const Scenario& s, std::uint64_t seed, int window, bool slow, std::vector<std::string> only) {
        return json_to_py(run_checks(s, make_options(seed, window, slow, std::move(only))).to_json());
      },
      py::arg("scenario"), py::arg("seed") = 1, py::arg("window") = 6, py::arg("slow") = false,
      py::arg("only") = std::vector<std::string>{});
  m.def(
      "reproduce",
      [](const std::string& name, const std::filesystem::path& corpus, std::uint64_t seed) {
        return json_to_py(reproduce(name, corpus, make_options(seed, 6, false, {})).to_json());
      },
      py::arg("name"), py::arg("corpus"), py::arg("seed") = 1);
}
