#include "krein/harness.hpp"

#include "krein/contractive.hpp"
#include "krein/error.hpp"
#include "krein/kvn.hpp"
#include "krein/partial_op.hpp"
#include "krein/psd_equation.hpp"
#include "krein/shorted.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace krein {

Outcome outcome_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoExtension:
    case ErrorKind::NotSolvable:
      return Outcome::Infeasible;
    case ErrorKind::OracleMismatch:
    case ErrorKind::RouteMismatch:
    case ErrorKind::RangeIdentityViolated:
      return Outcome::OracleFailure;
    default:
      return Outcome::InvalidInput;
  }
}

ToleranceProfile resolve_tolerances(const Instance& instance, const RunOptions& options) {
  return options.flag_overrides.apply(instance.tolerances.apply(options.base_tolerances));
}

namespace {

const Matrix& need(const std::optional<Matrix>& m, const char* section) {
  if (!m) throw Error(ErrorKind::MissingSection, std::string("instance has no '") + section + "'");
  return *m;
}

PartialOperator partial_from(const Instance& inst, const ToleranceProfile& tol) {
  return make_partial(need(inst.domain, "domain"), need(inst.image, "image"), tol);
}

ContractivePartial contraction_from(const Instance& inst, const ToleranceProfile& tol) {
  return ContractivePartial::make(need(inst.domain, "domain"), need(inst.image, "image"), tol);
}

Rng section_rng(std::uint64_t seed, std::uint32_t section) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), section};
  return Rng(seq);
}

void add_checks(Report& r, const CheckList& checks, std::string_view prefix) {
  for (const OracleCheck& c : checks) {
    r.oracle_checks.push_back({std::string(prefix) + "." + c.name, c.passed, c.discrepancy});
  }
}

void run_check(Report& r, RunResult& result, const Instance& inst, const ToleranceProfile& tol) {
  const PartialOperator p = partial_from(inst, tol);
  const Theorem1Report t1 = theorem1_report(p);
  const ExtensionBound bound = has_bounded_psd_extension(p);
  r.verdict("extension_exists", bound.exists);
  r.verdict("cond_dstar_dense", t1.cond_dstar_dense);
  r.verdict("cond_perp_ran", t1.cond_perp_ran);
  r.verdict("cond_pos_closable", t1.cond_pos_closable);
  r.verdict("all_agree", t1.all_agree);
  r.scalar("domain_dim", static_cast<double>(p.domain_dim()));
  r.scalar("dstar_dim", static_cast<double>(dstar(p).dim()));
  if (bound.gamma) r.scalar("gamma", *bound.gamma);
  const bool consistent = t1.all_agree && t1.cond_dstar_dense == bound.exists;
  r.oracle_checks.push_back({"extendibility_conditions_agree", consistent, consistent ? 0.0 : 1.0});
  if (!bound.exists) result.outcome = Outcome::Infeasible;
}

void run_kvn(Report& r, RunResult& result, const Instance& inst, const ToleranceProfile& tol) {
  const PartialOperator p = partial_from(inst, tol);
  const ExtensionBound bound = has_bounded_psd_extension(p);
  r.verdict("extension_exists", bound.exists);
  if (!bound.exists) {
    result.outcome = Outcome::Infeasible;
    return;
  }
  const Matrix tn = kvn_extension(p);
  r.scalar("gamma", *bound.gamma);
  r.scalar("norm_T_N", spectral_norm(tn));
  r.matrix("T_N", tn);
  const double mismatch =
      p.domain_dim() == 0 ? 0.0 : spectral_norm(tn * p.dom_basis() - p.image());
  r.oracle_checks.push_back({"kvn_extends_operator", is_extension(tn, p), mismatch});
  const double gap = std::abs(spectral_norm(tn) - *bound.gamma);
  r.oracle_checks.push_back(
      {"kvn_norm_equals_gamma", gap <= tol.residual * std::max(*bound.gamma, 1.0), gap});
}

void run_short(Report& r, const Instance& inst, const ToleranceProfile& tol) {
  const Matrix& s = need(inst.full_operator, "full_operator");
  const Subspace d = Subspace::span(need(inst.domain, "domain"), tol);
  const ShortedResult shorted = short_to(s, d, tol);
  r.scalar("subspace_dim", static_cast<double>(d.dim()));
  r.matrix("shorted", shorted.shorted);
  r.matrix("kvn_part", shorted.kvn_part);

  const Index n = s.rows();
  Matrix u(n, n);
  u.leftCols(d.dim()) = d.basis();
  u.rightCols(n - d.dim()) = d.orthogonal_complement().basis();
  const Matrix schur =
      u * schur_oracle(symmetrize(u.transpose() * s * u), d.dim(), tol) * u.transpose();
  const double gap = spectral_norm(schur - shorted.shorted);
  r.oracle_checks.push_back(
      {"shorted_matches_schur_complement", gap <= 1e-8 * std::max(spectral_norm(s), 1.0), gap});
  const double leak = d.dim() == 0 ? 0.0 : spectral_norm(shorted.shorted * d.basis());
  r.oracle_checks.push_back(
      {"shorted_annihilates_subspace", leak <= tol.residual * std::max(spectral_norm(s), 1.0), leak});
  try {
    r.scalar("root_range_dim", static_cast<double>(shorted_root_range(s, d, tol).dim()));
    r.oracle_checks.push_back({"shorted_root_range_identity", true, 0.0});
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::RangeIdentityViolated) throw;
    r.oracle_checks.push_back({"shorted_root_range_identity", false, 1.0});
  }
}

void run_interval(Report& r, const Instance& inst, const ToleranceProfile& tol) {
  const ContractivePartial c = contraction_from(inst, tol);
  const ExtensionInterval interval = extremal_extensions(c);
  r.verdict("norm_attained", c.norm_attained());
  r.scalar("operator_norm_on_D", c.operator_norm_on_D());
  r.matrix("s_m", interval.s_m);
  r.matrix("s_M", interval.s_M);
  if (inst.full_operator) {
    const MembershipReport m = interval_membership(*inst.full_operator, c, interval);
    r.verdict("member", m.by_interval);
    r.oracle_checks.push_back(
        {"membership_routes_agree", m.by_norm == m.by_interval, m.by_norm == m.by_interval ? 0.0 : 1.0});
  }
}

void run_unique(Report& r, const Instance& inst, const ToleranceProfile& tol) {
  const ContractivePartial c = contraction_from(inst, tol);
  r.verdict("norm_attained", c.norm_attained());
  r.scalar("operator_norm_on_D", c.operator_norm_on_D());
  try {
    const UniquenessReport u = uniqueness_report(c);
    r.verdict("unique", u.unique);
    r.verdict("route_interval_collapse", u.by_interval);
    r.verdict("route_range_intersection", u.by_range);
    if (u.by_sup) r.verdict("route_supremum", *u.by_sup);
    r.oracle_checks.push_back({"uniqueness_routes_agree", true, 0.0});
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::RouteMismatch) throw;
    r.notes.emplace_back(e.what());
    r.oracle_checks.push_back({"uniqueness_routes_agree", false, 1.0});
  }
}

void run_solve(Report& r, RunResult& result, const Instance& inst, const ToleranceProfile& tol) {
  if (!inst.equation) throw Error(ErrorKind::MissingSection, "instance has no 'equation_a'/'equation_b'");
  const Matrix& a = inst.equation->a;
  const Matrix& b = inst.equation->b;
  const Solvability s = check_solvable(a, b, tol);
  r.verdict("well_defined", s.well_defined);
  r.verdict("symmetric_form", s.symmetric_form);
  r.verdict("positive_form", s.positive_form);
  r.verdict("bounded_condition", s.bounded_condition);
  r.verdict("solvable", s.solvable);
  if (!s.solvable) {
    if (s.certificate) {
      r.matrix("certificate", *s.certificate);
      const Vector& x = *s.certificate;
      r.scalar("certificate_form", x.dot(symmetrize(b.transpose() * a) * x));
      r.scalar("certificate_image_norm", (b * x).norm());
    }
    result.outcome = Outcome::Infeasible;
    return;
  }
  const Matrix sn = solve_min(a, b, tol);
  r.matrix("S_N", sn);
  const double residual = spectral_norm(sn * a - b);
  r.scalar("residual", residual);
  r.oracle_checks.push_back(
      {"minimal_solution_residual", residual <= tol.residual * std::max(spectral_norm(b), 1.0), residual});
}

template <typename Fn>
void verify_section(Report& r, std::string_view name, Fn&& fn) {
  try {
    add_checks(r, fn(), name);
    r.verdict(std::string("applicable_") + std::string(name), true);
  } catch (const Error& e) {
    const Outcome o = outcome_for(e.kind());
    if (o == Outcome::InvalidInput) {
      // The instance does not carry this structure; not a failure.
      r.verdict(std::string("applicable_") + std::string(name), false);
      r.notes.push_back(std::string(name) + ": " + e.what());
    } else {
      r.verdict(std::string("applicable_") + std::string(name), true);
      r.notes.push_back(std::string(name) + ": " + e.what());
      r.oracle_checks.push_back({std::string(name) + ".completed", false, 1.0});
    }
  }
}

void run_verify_all(Report& r, const Instance& inst, const ToleranceProfile& tol,
                    std::uint64_t seed, SampleBudget budget) {
  if (inst.domain) {
    verify_section(r, "partial", [&] {
      const PartialOperator p = partial_from(inst, tol);
      Rng rng = section_rng(seed, 1);
      return verify_partial(p, rng, budget);
    });
    verify_section(r, "contraction", [&] {
      const ContractivePartial c = contraction_from(inst, tol);
      Rng rng = section_rng(seed, 2);
      return verify_contraction(c, rng, budget);
    });
  }
  if (inst.full_operator && inst.domain) {
    verify_section(r, "shorting", [&] {
      const Subspace d = Subspace::span(*inst.domain, tol);
      Rng rng = section_rng(seed, 3);
      return verify_shorting(*inst.full_operator, d, tol, rng, budget);
    });
  }
  if (inst.equation) {
    verify_section(r, "equation", [&] {
      Rng rng = section_rng(seed, 4);
      return verify_equation(inst.equation->a, inst.equation->b, tol, rng, budget);
    });
  }
  r.scalar("checks_run", static_cast<double>(r.oracle_checks.size()));
  r.verdict("all_passed", all_passed(r.oracle_checks));
}

}  // namespace

RunResult run_command(std::string_view command, const Instance& instance, const RunOptions& options) {
  RunResult result;
  Report& r = result.report;
  r.command = std::string(command);
  try {
    const ToleranceProfile tol = resolve_tolerances(instance, options);
    tol.validate();
    r.tolerances_used = tol;
    const std::uint64_t seed = options.seed ? *options.seed : instance.seed.value_or(0);
    const SampleBudget budget{std::max(options.samples, 1)};

    if (command == "check") {
      run_check(r, result, instance, tol);
    } else if (command == "kvn") {
      run_kvn(r, result, instance, tol);
    } else if (command == "short") {
      run_short(r, instance, tol);
    } else if (command == "interval") {
      run_interval(r, instance, tol);
    } else if (command == "unique") {
      run_unique(r, instance, tol);
    } else if (command == "solve") {
      run_solve(r, result, instance, tol);
    } else if (command == "verify-all") {
      run_verify_all(r, instance, tol, seed, budget);
    } else {
      throw Error(ErrorKind::ParseError, "unknown command '" + std::string(command) + "'");
    }
  } catch (const Error& e) {
    r.notes.emplace_back(e.what());
    result.outcome = outcome_for(e.kind());
    return result;
  }
  if (result.outcome == Outcome::Success && !all_passed(r.oracle_checks)) {
    result.outcome = Outcome::OracleFailure;
  }
  return result;
}

std::string format_report(const Report& report) {
  std::ostringstream os;
  const ToleranceProfile& tol = report.tolerances_used;
  os << "command " << report.command << '\n';
  os << "tolerances rank_rel=" << format_double(tol.rank_rel)
     << " psd_slack=" << format_double(tol.psd_slack)
     << " residual=" << format_double(tol.residual) << '\n';
  for (const auto& [name, value] : report.verdicts) {
    os << "verdict " << name << ' ' << (value ? "true" : "false") << '\n';
  }
  for (const auto& [name, value] : report.scalars) {
    os << "scalar " << name << ' ' << format_double(value) << '\n';
  }
  for (const auto& [name, m] : report.matrices) {
    os << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        if (j > 0) os << ' ';
        os << format_double(m(i, j));
      }
      os << '\n';
    }
  }
  for (const OracleCheck& c : report.oracle_checks) {
    os << "oracle " << c.name << ' ' << (c.passed ? "pass" : "fail") << ' '
       << format_double(c.discrepancy) << '\n';
  }
  for (const std::string& note : report.notes) os << "note " << note << '\n';
  os << "end\n";
  return os.str();
}

}  // namespace krein
