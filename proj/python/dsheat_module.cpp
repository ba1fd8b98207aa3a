#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "dsheat/bounds.hpp"
#include "dsheat/errors.hpp"
#include "dsheat/evolution.hpp"
#include "dsheat/experiments.hpp"
#include "dsheat/field.hpp"
#include "dsheat/inequalities.hpp"
#include "dsheat/kernel.hpp"
#include "dsheat/params.hpp"

namespace py = pybind11;
using namespace dsheat;

namespace {

Field field_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> values, Coord lo) {
  const auto nd = static_cast<std::size_t>(values.ndim());
  if (lo.empty()) lo.assign(nd, 0);
  if (lo.size() != nd) throw DomainError("offset length must equal the array dimension");
  Box box{lo, Coord(nd)};
  for (std::size_t k = 0; k < nd; ++k) box.extents[k] = values.shape(static_cast<py::ssize_t>(k));
  return Field(std::move(box), std::vector<double>(values.data(), values.data() + values.size()));
}

py::array_t<double> field_to_array(const Field& f) {
  std::vector<py::ssize_t> shape(f.box().extents.begin(), f.box().extents.end());
  py::array_t<double> out(shape);
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

py::dict run_to_dict(const RunRecord& r) {
  py::dict d;
  d["outcome"] = std::string(to_string(r.outcome));
  d["outcome_tau"] = r.outcome_tau;
  d["blowup_tau"] = r.blowup ? py::cast(r.blowup->at_tau) : py::none();
  d["blowup_site"] = r.blowup ? py::cast(r.blowup->witness) : py::none();
  py::list rows;
  for (const auto& row : r.rows) {
    py::dict x;
    x["tau"] = row.tau;
    x["sup_f"] = row.sup_f;
    x["sup_g"] = row.sup_g;
    x["l1_f"] = row.l1_f;
    x["support_cells"] = row.support_cells;
    rows.append(x);
  }
  d["rows"] = rows;
  d["final_f"] = r.final_f;
  d["warnings"] = r.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(dsheat_py, m) {
  m.doc() = "Discrete semilinear heat equation on Z^d";

  // Translators run newest first, so the base class is registered first.
  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<ResourceLimitError>(m, "ResourceLimitError", base);
  py::register_exception<ContractViolation>(m, "ContractViolation", base);
  py::register_exception<NumericOverflowError>(m, "NumericOverflowError", base);

  py::enum_<Variant>(m, "Variant")
      .value("Standard", Variant::Standard)
      .value("Signed", Variant::Signed)
      .value("NaiveEuler", Variant::NaiveEuler);

  py::class_<Params>(m, "Params")
      .def(py::init([](int d, double alpha, std::optional<double> delta, Variant variant, double naive_lambda) {
             Params p;
             p.d = d;
             p.alpha = alpha;
             p.delta = delta;
             p.variant = variant;
             p.naive_lambda = naive_lambda;
             p.validate();
             return p;
           }),
           py::arg("d") = 1, py::arg("alpha") = 1.0, py::arg("delta") = py::none(),
           py::arg("variant") = Variant::Standard, py::arg("naive_lambda") = 0.0)
      .def_readwrite("d", &Params::d)
      .def_readwrite("alpha", &Params::alpha)
      .def_readwrite("delta", &Params::delta)
      .def_readwrite("variant", &Params::variant)
      .def_readwrite("naive_lambda", &Params::naive_lambda);

  py::class_<Field>(m, "Field")
      .def(py::init<int>(), py::arg("dim") = 1)
      .def(py::init(&field_from_array), py::arg("values"), py::arg("offset") = Coord{},
           "Dense array of values whose first cell sits at `offset`.")
      .def_static(
          "point", [](const Coord& site, double value) { return Field::point(site, value); }, py::arg("site"),
          py::arg("value"))
      .def_static("from_sites", &Field::from_sites, py::arg("dim"), py::arg("sites"))
      .def_property_readonly("dim", &Field::dim)
      .def_property_readonly("offset", [](const Field& f) { return f.box().lo; })
      .def_property_readonly("extents", [](const Field& f) { return f.box().extents; })
      .def("to_numpy", &field_to_array)
      .def(
          "at", [](const Field& f, const Coord& site) { return f.at(site); }, py::arg("site"))
      .def("support_size", &Field::support_size)
      .def("is_zero", &Field::is_zero)
      .def("l1_norm", &l1_norm)
      .def("sup_norm", &sup_norm)
      .def("translated", [](const Field& f, const Coord& shift) { return f.translated(shift); })
      .def("scaled", &Field::scaled)
      .def(py::self == py::self);

  m.def("neighbor_average", py::overload_cast<const Field&>(&neighbor_average), py::arg("v"));

  m.def("run", [](const Params& p, const Field& f0, std::int64_t horizon) { return run_to_dict(run(p, f0, horizon)); },
        py::arg("params"), py::arg("f0"), py::arg("horizon"));
  m.def("uniform_solution", &uniform_solution, py::arg("a"), py::arg("alpha"), py::arg("tau"));
  m.def("last_defined_step", &last_defined_step, py::arg("a"), py::arg("alpha"));
  m.def("scaled_uniform_solution", &scaled_uniform_solution, py::arg("a"), py::arg("alpha"), py::arg("delta"),
        py::arg("tau"));
  m.def("scaled_last_defined_step", &scaled_last_defined_step, py::arg("a"), py::arg("alpha"), py::arg("delta"));
  m.def("nonlinearity_H", &nonlinearity_H, py::arg("g"), py::arg("alpha"));

  py::class_<KernelTable>(m, "KernelTable")
      .def_readonly("d", &KernelTable::d)
      .def_readonly("max_tau", &KernelTable::max_tau)
      .def("slice", &KernelTable::slice, py::arg("tau"), py::return_value_policy::copy);
  m.def(
      "build_kernel", [](int d, std::int64_t max_tau) { return build_kernel(d, max_tau); }, py::arg("d"),
      py::arg("max_tau"));
  m.def("origin_constant_4pi", &origin_constant_4pi, py::arg("d"));
  m.def("origin_constant_clt", &origin_constant_clt, py::arg("d"));

  m.def(
      "sandwich_trace",
      [](const Params& p, const Field& f0, std::int64_t steps) {
        SandwichState s = init_sandwich(p, f0);
        py::list out;
        for (;;) {
          const SandwichReport r = check_sandwich(s);
          py::dict row;
          row["tau"] = s.tau;
          row["alive"] = s.f.alive();
          row["ok"] = r.ok;
          row["m_prefix"] = s.m_prefix;
          row["has_sub"] = s.sub.has_value();
          row["has_super"] = s.super.has_value();
          row["worst_sub_excess"] = r.worst_sub_excess;
          row["worst_super_excess"] = r.worst_super_excess;
          out.append(row);
          if (s.tau >= steps || !s.f.alive()) break;
          s = advance_sandwich(s);
        }
        return out;
      },
      py::arg("params"), py::arg("f0"), py::arg("steps"));
  m.def(
      "subsolution_blowup_bound",
      [](const Field& f0, const Params& p, std::int64_t horizon) { return subsolution_blowup_bound(f0, p, horizon); },
      py::arg("f0"), py::arg("params"), py::arg("horizon"));

  m.def("phi", [](const std::vector<double>& xs, double alpha) { return phi(xs, alpha); }, py::arg("xs"),
        py::arg("alpha"));
  m.def(
      "inequality_suites",
      [](std::uint64_t seed, std::int64_t samples) {
        py::dict out;
        for (const auto& s : run_all_suites(seed, samples)) {
          out[py::str(s.name)] = py::dict(py::arg("samples") = s.samples, py::arg("violations") = s.violations,
                                          py::arg("worst_margin") = s.worst_margin);
        }
        return out;
      },
      py::arg("seed") = 1, py::arg("samples") = 10000);

  m.def("critical_l1_bound_4pi", &critical_l1_bound_4pi, py::arg("d"));
  m.def("critical_l1_bound_clt", &critical_l1_bound_clt, py::arg("d"));
  m.def(
      "critical_case_study",
      [](int d, const std::vector<double>& epsilons, std::int64_t horizon) {
        const CriticalReport r = critical_case_study(d, epsilons, horizon);
        py::list cases;
        for (const auto& c : r.cases) {
          cases.append(py::dict(py::arg("epsilon") = c.epsilon, py::arg("event") = std::string(to_string(c.event)),
                                py::arg("blowup_tau") = c.blowup_tau,
                                py::arg("exceed_tau_4pi") = c.exceed_tau_4pi, py::arg("last_tau") = c.last_tau,
                                py::arg("max_l1") = c.max_l1));
        }
        return cases;
      },
      py::arg("d"), py::arg("epsilons"), py::arg("horizon"));
  m.def(
      "harmonic_growth_check",
      [](int d, std::int64_t s_lo, std::int64_t s_hi) {
        const HarmonicGrowthReport r = harmonic_growth_check(d, s_lo, s_hi);
        return py::dict(py::arg("fitted_slope") = r.fitted_slope,
                        py::arg("max_relative_deviation") = r.max_relative_deviation,
                        py::arg("linear_in_log") = r.linear_in_log,
                        py::arg("predicted_slope_clt") = r.predicted_slope_clt);
      },
      py::arg("d"), py::arg("s_lo"), py::arg("s_hi"));
}
