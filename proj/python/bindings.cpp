#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hamext/errors.hpp"
#include "hamext/harness.hpp"
#include "hamext/verify.hpp"

namespace py = pybind11;
using namespace hamext;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array &a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1) || a.shape(0) == 0)
    throw DimensionError("expected a non-empty square 2-d array");
  const auto d = static_cast<std::size_t>(a.shape(0));
  return Matrix(d, std::vector<double>(a.data(), a.data() + d * d));
}

Array from_matrix(const Matrix &m) {
  const auto d = static_cast<py::ssize_t>(m.dim());
  Array out({d, d});
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

Array from_vector(const std::vector<double> &v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Vector to_vector(const Array &a) {
  if (a.ndim() != 1) throw DimensionError("expected a 1-d array");
  return Vector(a.data(), a.data() + a.shape(0));
}

ExtendedPoint to_point(const Array &q, const Array &p, double t, double u) {
  return ExtendedPoint{PhasePoint(to_vector(q), to_vector(p)), t, u};
}

py::tuple point_tuple(const ExtendedPoint &z) {
  return py::make_tuple(from_vector(Vector(z.y.q().begin(), z.y.q().end())),
                        from_vector(Vector(z.y.p().begin(), z.y.p().end())), z.t, z.u);
}

py::dict descriptor_dict(const MethodDescriptor &d) {
  py::dict out;
  out["id"] = d.id;
  out["order"] = d.order;
  out["canonical"] = d.canonical;
  out["symmetric"] = d.symmetric;
  out["exponential"] = d.exponential;
  out["updates_u"] = d.updates_u;
  out["properties"] = d.properties();
  return out;
}

}  // namespace

PYBIND11_MODULE(hamext, m) {
  m.doc() = "Structure-preserving integrators in extended phase space for y' = A(t) y";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<LogDomainError>(m, "LogDomainError", base.ptr());
  py::register_exception<SeriesDivergence>(m, "SeriesDivergence", base.ptr());
  py::register_exception<NotSymplectic>(m, "NotSymplectic", base.ptr());
  py::register_exception<NotApplicable>(m, "NotApplicable", base.ptr());
  py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());

  // Kernels.
  m.def("mat_exp", [](const Array &x) { return from_matrix(mat_exp(to_matrix(x))); }, py::arg("x"));
  m.def("mat_log", [](const Array &b) { return from_matrix(mat_log_near_identity(to_matrix(b))); },
        py::arg("b"), "Logarithm of a matrix near the identity.");
  m.def("commutator",
        [](const Array &x, const Array &y) {
          return from_matrix(commutator(to_matrix(x), to_matrix(y)));
        },
        py::arg("x"), py::arg("y"));
  m.def("dexp",
        [](const Array &x, const Array &y) { return from_matrix(dexp(to_matrix(x), to_matrix(y))); },
        py::arg("x"), py::arg("y"));
  m.def("structure_matrix", [](std::size_t n) { return from_matrix(StructureMatrix(n).matrix()); },
        py::arg("n"));
  m.def("project_sp",
        [](const Array &x) {
          const Matrix mx = to_matrix(x);
          return from_matrix(project_sp(mx, StructureMatrix(mx.dim() / 2)));
        },
        py::arg("x"));
  m.def("symplectic_residual",
        [](const Array &x) {
          const Matrix mx = to_matrix(x);
          return symplectic_residual(mx, StructureMatrix(mx.dim() / 2));
        },
        py::arg("m"));

  // Problems.
  py::class_<LinearHamiltonianProblem>(m, "Problem")
      .def(py::init([](std::size_t n, std::function<Array(double)> a,
                       std::function<Array(double)> da) {
             return LinearHamiltonianProblem(
                 n, [a](double t) { py::gil_scoped_acquire g; return to_matrix(a(t)); },
                 [da](double t) { py::gil_scoped_acquire g; return to_matrix(da(t)); });
           }),
           py::arg("n"), py::arg("coefficient"), py::arg("coefficient_derivative"))
      .def_static("oscillator",
                  [](std::size_t n, double epsilon, double alpha) {
                    return PerturbedOscillator{n, epsilon, alpha}.problem();
                  },
                  py::arg("n"), py::arg("epsilon"), py::arg("alpha"))
      .def_static("autonomous",
                  [](const Array &a) { return LinearHamiltonianProblem::autonomous(to_matrix(a)); },
                  py::arg("a"))
      .def_property_readonly("n", &LinearHamiltonianProblem::n)
      .def("coefficient", [](const LinearHamiltonianProblem &p, double t) {
        return from_matrix(p.coefficient(t));
      });

  m.def("hamiltonian",
        [](const LinearHamiltonianProblem &prob, const Array &q, const Array &p, double t) {
          return hamiltonian(prob, PhasePoint(to_vector(q), to_vector(p)), t);
        },
        py::arg("problem"), py::arg("q"), py::arg("p"), py::arg("t"));
  m.def("extended_hamiltonian",
        [](const LinearHamiltonianProblem &prob, const Array &q, const Array &p, double t,
           double u) { return extended_hamiltonian(prob, to_point(q, p, t, u)); },
        py::arg("problem"), py::arg("q"), py::arg("p"), py::arg("t"), py::arg("u"));

  // Methods.
  m.def("methods",
        [] {
          py::list out;
          for (MethodId id : all_method_ids()) out.append(descriptor_dict(make_method(id).descriptor()));
          return out;
        },
        "Descriptors of every available method.");
  m.def("describe", [](const std::string &id) { return descriptor_dict(make_method(id).descriptor()); },
        py::arg("method"));
  m.def("step",
        [](const std::string &id, const LinearHamiltonianProblem &prob, const Array &q,
           const Array &p, double t, double u, double h) {
          return point_tuple(make_method(id).step(prob, to_point(q, p, t, u), h).z_next);
        },
        py::arg("method"), py::arg("problem"), py::arg("q"), py::arg("p"), py::arg("t"),
        py::arg("u"), py::arg("h"), "One step; returns (Q, P, T, U).");
  m.def("integrate",
        [](const std::string &id, const LinearHamiltonianProblem &prob, const Array &q,
           const Array &p, double t, double u, double h, std::size_t steps) {
          const Method method = make_method(id);
          ExtendedPoint z = to_point(q, p, t, u);
          for (std::size_t k = 0; k < steps; ++k) z = method.step(prob, z, h).z_next;
          return point_tuple(z);
        },
        py::arg("method"), py::arg("problem"), py::arg("q"), py::arg("p"), py::arg("t"),
        py::arg("u"), py::arg("h"), py::arg("steps"));

  // Checks.
  m.def("check_canonicity",
        [](const std::string &id, const LinearHamiltonianProblem &prob, const Array &q,
           const Array &p, double t, double u, double h, double fd_step) {
          const CanonicityReport r =
              check_canonicity(make_method(id), prob, to_point(q, p, t, u), h, fd_step);
          py::dict out;
          out["symplectic_residual"] = r.symplectic_residual_yy;
          out["w_residual"] = r.w_condition_residual;
          out["extended_residual"] = r.extended_residual;
          return out;
        },
        py::arg("method"), py::arg("problem"), py::arg("q"), py::arg("p"), py::arg("t"),
        py::arg("u"), py::arg("h"), py::arg("fd_step") = 1e-5);
  m.def("check_symmetry",
        [](const std::string &id, const LinearHamiltonianProblem &prob, const Array &q,
           const Array &p, double t, double u, double h) {
          return check_symmetry(make_method(id), prob, to_point(q, p, t, u), h);
        },
        py::arg("method"), py::arg("problem"), py::arg("q"), py::arg("p"), py::arg("t"),
        py::arg("u"), py::arg("h"));
  m.def("check_exponential_exactness",
        [](const std::string &id, const Array &a, const Array &y, double h) {
          return check_exponential_exactness(make_method(id), to_matrix(a),
                                             PhasePoint(to_vector(y)), 0.0, h);
        },
        py::arg("method"), py::arg("a"), py::arg("y"), py::arg("h"));
  m.def("estimate_order",
        [](const std::string &id, const LinearHamiltonianProblem &prob, const Array &q,
           const Array &p, double t0, double t_end, double h0) {
          const ExtendedPoint z = initial_point(prob, PhasePoint(to_vector(q), to_vector(p)), t0);
          const OrderEstimate e = estimate_order(make_method(id), prob, z, t_end, h0);
          py::dict out;
          out["order"] = e.measured_order;
          out["step_sizes"] = std::vector<double>(e.step_sizes.begin(), e.step_sizes.end());
          out["errors"] = std::vector<double>(e.errors.begin(), e.errors.end());
          return out;
        },
        py::arg("method"), py::arg("problem"), py::arg("q"), py::arg("p"), py::arg("t0"),
        py::arg("t_end"), py::arg("h0"));

  // Experiments.
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_static("ranking", &ExperimentConfig::ranking)
      .def_static("long_time", &ExperimentConfig::long_time)
      .def_static("parse",
                  [](const std::string &text) {
                    std::istringstream in(text);
                    return parse_config(in);
                  },
                  py::arg("text"))
      .def("set", [](ExperimentConfig &c, const std::string &key,
                     const std::string &value) { set_config_value(c, key, value); })
      .def("validate", &ExperimentConfig::validate)
      .def("step_count", &ExperimentConfig::step_count)
      .def("__str__",
           [](const ExperimentConfig &c) {
             std::ostringstream out;
             write_config(out, c);
             return out.str();
           })
      .def_readwrite("n", &ExperimentConfig::n)
      .def_readwrite("epsilon", &ExperimentConfig::epsilon)
      .def_readwrite("alpha", &ExperimentConfig::alpha)
      .def_readwrite("q0", &ExperimentConfig::q0)
      .def_readwrite("p0", &ExperimentConfig::p0)
      .def_readwrite("t0", &ExperimentConfig::t0)
      .def_readwrite("h", &ExperimentConfig::h)
      .def_readwrite("t_end", &ExperimentConfig::t_end)
      .def_readwrite("methods", &ExperimentConfig::method_ids)
      .def_readwrite("reference_method", &ExperimentConfig::reference_method)
      .def_readwrite("reference_h", &ExperimentConfig::reference_h)
      .def_readwrite("block_size", &ExperimentConfig::block_size);

  m.def("run_trajectory",
        [](const ExperimentConfig &c, const std::string &id, bool reference) {
          EnergySeries s;
          {
            py::gil_scoped_release nogil;
            s = run_trajectory(c, id);
            if (reference) s.h_reference = run_reference(c);
          }
          py::dict out;
          out["t"] = from_vector(s.times);
          out["H"] = from_vector(s.h_values);
          out["u"] = s.u_values ? py::object(from_vector(*s.u_values)) : py::none();
          out["K"] = s.k_values ? py::object(from_vector(*s.k_values)) : py::none();
          out["H_ref"] = reference ? py::object(from_vector(s.h_reference)) : py::none();
          return out;
        },
        py::arg("config"), py::arg("method"), py::arg("reference") = false);
  m.def("smooth_block_max",
        [](const Array &t, const Array &e, std::size_t block) {
          const SmoothedErrorSeries s = smooth_block_max(to_vector(t), to_vector(e), block);
          return py::make_tuple(from_vector(s.block_times), from_vector(s.block_max_errors));
        },
        py::arg("t"), py::arg("errors"), py::arg("block_size"));
  m.def("table",
        [](const ExperimentConfig &c) {
          TableResult t;
          {
            py::gil_scoped_release nogil;
            t = table_one(c);
          }
          py::list rows;
          for (const auto &r : t.rows) {
            py::dict d = descriptor_dict(r.descriptor);
            d["max_error"] = r.max_error;
            d["tier"] = r.tier ? py::object(py::str(std::string(to_string(*r.tier)))) : py::none();
            d["error"] = r.error.empty() ? py::object(py::none()) : py::object(py::str(r.error));
            rows.append(d);
          }
          py::dict out;
          out["phase_ceiling"] = t.phase_ceiling;
          out["rows"] = rows;
          return out;
        },
        py::arg("config"), "Rank the configured methods; rows sorted by tier and error.");
}
