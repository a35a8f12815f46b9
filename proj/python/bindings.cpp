#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hyperem/acceptance.hpp"
#include "hyperem/classify.hpp"
#include "hyperem/error.hpp"
#include "hyperem/exact.hpp"
#include "hyperem/geometry.hpp"
#include "hyperem/io.hpp"
#include "hyperem/ode.hpp"

namespace py = pybind11;
using namespace hyperem;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Radial Emden-Fowler solutions on hyperbolic space";

  static py::exception<Error> error(m, "HyperemError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error(e.what());
    }
  });

  py::class_<Params>(m, "Params")
      .def(py::init<int, double, double, double>(), py::arg("n") = 3, py::arg("p") = 2.0,
           py::arg("c") = 1.0, py::arg("alpha") = 1.0)
      .def_readwrite("n", &Params::n)
      .def_readwrite("p", &Params::p)
      .def_readwrite("c", &Params::c)
      .def_readwrite("alpha", &Params::alpha)
      .def("validate", &Params::validate);

  m.def("classify_regime", [](int n, double p) { return to_string(classify_regime(n, p)); });
  m.def("critical_exponent", &critical_exponent);
  m.def("spectral_gap", &spectral_gap);
  m.def("phi_n", &phi_n);
  m.def("psi_p", &psi_p);
  m.def("find_R_np", &find_R_np);
  m.def("c_np", &c_np);
  m.def("lambda_pair", [](int n, double c) {
    const LambdaPair lp = lambda_pair(n, c);
    return py::make_tuple(lp.lambda1, lp.lambda2);
  });

  py::class_<Event>(m, "Event")
      .def_property_readonly("kind", [](const Event& e) { return to_string(e.kind); })
      .def_readonly("r", &Event::r)
      .def_readonly("value", &Event::value);

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("alpha", &Trajectory::alpha)
      .def_property_readonly("r_end", &Trajectory::r_end)
      .def_property_readonly("termination",
                             [](const Trajectory& t) { return to_string(t.termination()); })
      .def_property_readonly("events",
                             [](const Trajectory& t) {
                               return std::vector<Event>(t.events().begin(), t.events().end());
                             })
      .def_property_readonly("samples",
                             [](const Trajectory& t) {
                               std::vector<std::tuple<double, double, double>> out;
                               for (const State& s : t.samples()) out.emplace_back(s.r, s.u, s.v);
                               return out;
                             })
      .def("at", [](const Trajectory& t, double r) {
        const State s = t.at(r);
        return py::make_tuple(s.u, s.v);
      });

  m.def(
      "integrate",
      [](int n, double p, double alpha, double c, double r_max, double tol) {
        return integrate(Params{n, p, c, alpha}, r_max, tol);
      },
      py::arg("n"), py::arg("p"), py::arg("alpha"), py::arg("c") = 1.0, py::arg("r_max") = 50.0,
      py::arg("tol") = 1e-10);

  m.def(
      "classify",
      [](int n, double p, double alpha, double c, double r_max, double tol) {
        return classify_solution({n, p, c, alpha}, r_max, tol);
      },
      py::arg("n"), py::arg("p"), py::arg("alpha"), py::arg("c") = 1.0, py::arg("r_max") = 50.0,
      py::arg("tol") = 1e-10);

  py::class_<Report>(m, "Report")
      .def_property_readonly("sign_class", [](const Report& r) { return to_string(r.sign_class); })
      .def_readonly("zero_count", &Report::zero_count)
      .def_readonly("zero_count_final", &Report::zero_count_final)
      .def_property_readonly("decay_law", [](const Report& r) { return to_string(r.decay.law); })
      .def_property_readonly("fitted_rate", [](const Report& r) { return r.decay.fitted_rate; })
      .def_property_readonly("fitted_constant",
                             [](const Report& r) { return r.decay.fitted_constant; })
      .def_property_readonly("separatrix_side",
                             [](const Report& r) { return to_string(r.separatrix_side); })
      .def_property_readonly("zeros",
                             [](const Report& r) {
                               std::vector<double> out;
                               for (const Event& e : r.zeros) out.push_back(e.r);
                               return out;
                             })
      .def("to_json", [](const Report& r) { return to_json(r).dump(); });

  py::class_<SeparatrixResult>(m, "SeparatrixResult")
      .def_readonly("alpha_star", &SeparatrixResult::alpha_star)
      .def_readonly("lo", &SeparatrixResult::lo)
      .def_readonly("hi", &SeparatrixResult::hi)
      .def_readonly("probes", &SeparatrixResult::probes)
      .def_readonly("converged", &SeparatrixResult::converged);

  m.def("find_separatrix", &find_separatrix, py::arg("n"), py::arg("p"), py::arg("lo") = 1.0,
        py::arg("hi") = 2.0, py::arg("tol_alpha") = 1e-4, py::arg("tol") = 1e-10,
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "first_zero_map",
      [](int n, double p, std::vector<double> alphas, double tol) {
        std::vector<std::pair<double, std::optional<double>>> out;
        for (const FirstZeroRow& row : first_zero_map(n, p, std::move(alphas), tol)) {
          out.emplace_back(row.alpha, row.r_alpha);
        }
        return out;
      },
      py::arg("n"), py::arg("p"), py::arg("alphas"), py::arg("tol") = 1e-10);

  py::class_<ClosedForm>(m, "ClosedForm")
      .def_property_readonly("family", [](const ClosedForm& f) { return to_string(f.family()); })
      .def_property_readonly("n", &ClosedForm::n)
      .def_property_readonly("p", &ClosedForm::p)
      .def_property_readonly("constant", &ClosedForm::constant)
      .def_property_readonly("printed_constant", &ClosedForm::printed_constant)
      .def_property_readonly("printed_constant_matches", &ClosedForm::printed_constant_matches)
      .def_property_readonly("amplitude", &ClosedForm::amplitude)
      .def("__call__", [](const ClosedForm& f, double r) { return f.eval(r).u; })
      .def("residual", &ClosedForm::residual);

  m.def("exact_ground_state", [](int n, const std::string& family) {
    if (family == "A") return exact_ground_state(n, Family::A);
    if (family == "B") return exact_ground_state(n, Family::B);
    if (family == "C") return exact_ground_state(n, Family::C);
    throw Error(ErrorKind::Domain, "family must be A, B or C");
  });

  m.def(
      "run_acceptance",
      [](std::vector<int> criteria) {
        AcceptanceOptions opt;
        opt.criteria = std::move(criteria);
        std::vector<std::tuple<int, std::string, bool, std::string>> out;
        for (const CriterionResult& r : run_acceptance(opt)) {
          out.emplace_back(r.id, r.name, r.pass, r.detail);
        }
        return out;
      },
      py::arg("criteria") = std::vector<int>{}, py::call_guard<py::gil_scoped_release>());
}
