#include "krein/contractive.hpp"
#include "krein/error.hpp"
#include "krein/harness.hpp"
#include "krein/instance.hpp"
#include "krein/kvn.hpp"
#include "krein/partial_op.hpp"
#include "krein/psd_equation.hpp"
#include "krein/shorted.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

namespace py = pybind11;
using namespace krein;

namespace {

// Subspaces cross the boundary as spanning matrices (n x k, columns).
Subspace subspace_of(const Matrix& spanning, const ToleranceProfile& tol) {
  return Subspace::span(spanning, tol);
}

py::dict report_dict(const Report& r) {
  py::dict verdicts, matrices, scalars;
  for (const auto& [k, v] : r.verdicts) verdicts[py::str(k)] = v;
  for (const auto& [k, v] : r.matrices) matrices[py::str(k)] = v;
  for (const auto& [k, v] : r.scalars) scalars[py::str(k)] = v;
  py::list checks;
  for (const OracleCheck& c : r.oracle_checks) {
    checks.append(py::make_tuple(c.name, c.passed, c.discrepancy));
  }
  py::dict out;
  out["command"] = r.command;
  out["verdicts"] = verdicts;
  out["matrices"] = matrices;
  out["scalars"] = scalars;
  out["oracle_checks"] = checks;
  out["notes"] = r.notes;
  return out;
}

}  // namespace

PYBIND11_MODULE(_krein, m) {
  m.doc() = "Positive and contractive extensions of partially defined operators";

  // Kept alive for the life of the process.
  static py::handle krein_error = py::exception<Error>(m, "KreinError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(krein_error)(e.what());
      err.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(krein_error.ptr(), err.ptr());
    }
  });

  py::class_<ToleranceProfile>(m, "ToleranceProfile")
      .def(py::init([](double rank_rel, double psd_slack, double residual) {
             ToleranceProfile t{rank_rel, psd_slack, residual};
             t.validate();
             return t;
           }),
           py::arg("rank_rel") = 1e-10, py::arg("psd_slack") = 1e-9, py::arg("residual") = 1e-8)
      .def_readonly("rank_rel", &ToleranceProfile::rank_rel)
      .def_readonly("psd_slack", &ToleranceProfile::psd_slack)
      .def_readonly("residual", &ToleranceProfile::residual)
      .def("__repr__", [](const ToleranceProfile& t) {
        return "ToleranceProfile(rank_rel=" + format_double(t.rank_rel) +
               ", psd_slack=" + format_double(t.psd_slack) +
               ", residual=" + format_double(t.residual) + ")";
      });

  py::class_<PartialOperator>(m, "PartialOperator")
      .def(py::init(&PartialOperator::make), py::arg("dom_basis"), py::arg("image"),
           py::arg("tol") = ToleranceProfile{})
      .def_property_readonly("ambient_dim", &PartialOperator::ambient_dim)
      .def_property_readonly("domain_dim", &PartialOperator::domain_dim)
      .def_property_readonly("dom_basis", &PartialOperator::dom_basis)
      .def_property_readonly("image", &PartialOperator::image)
      .def_property_readonly("gram", &PartialOperator::gram);

  py::class_<ContractivePartial>(m, "ContractivePartial")
      .def(py::init(&ContractivePartial::make), py::arg("dom_basis"), py::arg("image"),
           py::arg("tol") = ToleranceProfile{})
      .def_property_readonly("ambient_dim", &ContractivePartial::ambient_dim)
      .def_property_readonly("domain_dim", &ContractivePartial::domain_dim)
      .def_property_readonly("operator_norm_on_D", &ContractivePartial::operator_norm_on_D)
      .def_property_readonly("norm_attained", &ContractivePartial::norm_attained);

  m.def("kvn_extension", &kvn_extension, py::arg("p"));
  m.def("qform_tn", &qform_tn, py::arg("p"), py::arg("g"));
  m.def("is_extension", &is_extension, py::arg("s"), py::arg("p"));
  m.def("characterize_extension", &characterize_extension, py::arg("s"), py::arg("p"));
  m.def("kvn_range_criterion", &kvn_range_criterion, py::arg("s"), py::arg("p"));
  m.def("dstar", [](const PartialOperator& p) { return dstar(p).basis(); }, py::arg("p"),
        "Orthonormal basis of D_*(T).");
  m.def(
      "has_bounded_psd_extension",
      [](const PartialOperator& p) {
        const ExtensionBound b = has_bounded_psd_extension(p);
        return py::make_tuple(b.exists, b.gamma);
      },
      py::arg("p"), "(exists, gamma); gamma is None when no extension exists.");
  m.def(
      "theorem1_report",
      [](const PartialOperator& p) {
        const Theorem1Report r = theorem1_report(p);
        py::dict out;
        out["cond_dstar_dense"] = r.cond_dstar_dense;
        out["cond_perp_ran"] = r.cond_perp_ran;
        out["cond_pos_closable"] = r.cond_pos_closable;
        out["all_agree"] = r.all_agree;
        return out;
      },
      py::arg("p"));

  m.def(
      "short_to",
      [](const Matrix& s, const Matrix& d, const ToleranceProfile& tol) {
        return short_to(s, subspace_of(d, tol), tol).shorted;
      },
      py::arg("s"), py::arg("d"), py::arg("tol") = ToleranceProfile{},
      "S - (S|_D)_N with D spanned by the columns of d.");
  m.def(
      "shorted_qform",
      [](const Matrix& s, const Matrix& d, const Vector& h, const ToleranceProfile& tol) {
        return shorted_qform(s, subspace_of(d, tol), h, tol);
      },
      py::arg("s"), py::arg("d"), py::arg("h"), py::arg("tol") = ToleranceProfile{});
  m.def(
      "shorted_root_range",
      [](const Matrix& s, const Matrix& d, const ToleranceProfile& tol) {
        return shorted_root_range(s, subspace_of(d, tol), tol).basis();
      },
      py::arg("s"), py::arg("d"), py::arg("tol") = ToleranceProfile{});
  m.def("schur_oracle", &schur_oracle, py::arg("s"), py::arg("p"),
        py::arg("tol") = ToleranceProfile{});

  m.def(
      "extremal_extensions",
      [](const ContractivePartial& c) {
        const ExtensionInterval i = extremal_extensions(c);
        return py::make_tuple(i.s_m, i.s_M);
      },
      py::arg("c"), "(s_m, s_M)");
  m.def("interval_member",
        py::overload_cast<const Matrix&, const ContractivePartial&>(&interval_member),
        py::arg("s_tilde"), py::arg("c"));
  m.def("sup_qform", &sup_qform, py::arg("c"), py::arg("g"));
  m.def("uniqueness", &uniqueness, py::arg("c"));

  m.def(
      "check_solvable",
      [](const Matrix& a, const Matrix& b, const ToleranceProfile& tol) {
        const Solvability s = check_solvable(a, b, tol);
        py::dict out;
        out["well_defined"] = s.well_defined;
        out["symmetric_form"] = s.symmetric_form;
        out["positive_form"] = s.positive_form;
        out["bounded_condition"] = s.bounded_condition;
        out["solvable"] = s.solvable;
        out["certificate"] = s.certificate;
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("tol") = ToleranceProfile{});
  m.def("solve_min", &solve_min, py::arg("a"), py::arg("b"), py::arg("tol") = ToleranceProfile{});

  m.def(
      "run",
      [](const std::string& command, const std::string& instance_text,
         std::optional<std::uint64_t> seed, int samples) {
        RunOptions options;
        options.seed = seed;
        options.samples = samples;
        RunResult r;
        try {
          r = run_command(command, parse_instance(instance_text), options);
        } catch (const Error& e) {
          r.report.command = command;
          r.report.notes.emplace_back(e.what());
          r.outcome = outcome_for(e.kind());
        }
        return py::make_tuple(static_cast<int>(r.outcome), format_report(r.report),
                              report_dict(r.report));
      },
      py::arg("command"), py::arg("instance_text"), py::arg("seed") = py::none(),
      py::arg("samples") = 50,
      "Runs a harness command on instance text; returns (exit_code, report_text, report).");
  m.def(
      "gen_instance",
      [](const std::string& kind, Index n, Index k, std::uint64_t seed, bool degenerate) {
        return write_instance(gen_instance(parse_kind(kind), n, k, seed, degenerate));
      },
      py::arg("kind"), py::arg("n"), py::arg("k"), py::arg("seed"), py::arg("degenerate") = false);
}
