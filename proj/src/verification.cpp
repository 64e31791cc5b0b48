#include "krein/verification.hpp"

#include "krein/error.hpp"
#include "krein/psd_equation.hpp"
#include "krein/shorted.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace krein {

namespace {

class Tally {
 public:
  explicit Tally(std::string name) : check_{std::move(name), true, 0.0} {}

  void record(bool ok, double discrepancy) {
    check_.passed = check_.passed && ok;
    if (std::isfinite(discrepancy)) check_.discrepancy = std::max(check_.discrepancy, discrepancy);
  }
  // Boolean agreement checks count disagreements.
  void agree(bool ok) {
    check_.passed = check_.passed && ok;
    if (!ok) check_.discrepancy += 1.0;
  }

  OracleCheck done() const { return check_; }

 private:
  OracleCheck check_;
};

double scale_of(const Matrix& m) { return std::max(spectral_norm(m), 1.0); }

double psd_deficit(const Matrix& m) { return std::max(0.0, -min_eigenvalue(m)); }

Matrix complement_projector(const Subspace& d) {
  const Index n = d.ambient_dim();
  return Matrix::Identity(n, n) - d.projector();
}

// Nonzero PSD matrix with spectral norm drawn log-uniformly from [1e-4, 1].
Matrix random_scaled_psd(Index n, Rng& rng) {
  if (n == 0) return Matrix(0, 0);
  const Index rank = uniform_index(1, n, rng);
  const Matrix w = random_psd(n, rank, rng);
  return std::pow(10.0, uniform(-4.0, 0.0, rng)) / spectral_norm(w) * w;
}

}  // namespace

bool all_passed(const CheckList& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed; });
}

Matrix sample_parametrized_extension(const Matrix& tn, const Subspace& d, Rng& rng,
                                     double exact_prob) {
  const Index n = tn.rows();
  if (uniform(0.0, 1.0, rng) < exact_prob) return tn;
  const Matrix q_perp = d.orthogonal_complement().basis();
  return symmetrize(tn + q_perp * random_scaled_psd(n - d.dim(), rng) * q_perp.transpose());
}

Matrix sample_independent_extension(const PartialOperator& p, Rng& rng) {
  const Index n = p.ambient_dim();
  const Index k = p.domain_dim();
  const Subspace d = p.domain();
  const Matrix q_perp = d.orthogonal_complement().basis();
  Matrix u(n, n);
  u.leftCols(k) = p.dom_basis();
  u.rightCols(n - k) = q_perp;

  Matrix block = Matrix::Zero(n, n);
  const Matrix cross = q_perp.transpose() * p.image();
  block.topLeftCorner(k, k) = p.gram();
  block.bottomLeftCorner(n - k, k) = cross;
  block.topRightCorner(k, n - k) = cross.transpose();

  const Matrix w = random_psd(n - k, uniform_index(0, n - k, rng), rng);
  double shift = 1e-3 * std::max(spectral_norm(p.image()), 1.0);
  for (int attempt = 0; attempt < 200; ++attempt) {
    block.bottomRightCorner(n - k, n - k) = w + shift * Matrix::Identity(n - k, n - k);
    Matrix s = symmetrize(u * block * u.transpose());
    if (is_psd(s, p.tol())) return s;
    shift *= 2.0;
  }
  throw Error(ErrorKind::NoExtension, "no positive completion found");
}

CheckList verify_partial(const PartialOperator& p, Rng& rng, SampleBudget budget) {
  const ToleranceProfile& tol = p.tol();
  const Index n = p.ambient_dim();
  const Index k = p.domain_dim();
  CheckList out;

  const Theorem1Report t1 = theorem1_report(p);
  const ExtensionBound bound = has_bounded_psd_extension(p);
  {
    Tally t("extendibility_conditions_agree");
    t.agree(t1.all_agree);
    t.agree(t1.cond_dstar_dense == bound.exists);
    out.push_back(t.done());
  }
  {
    Tally t("dstar_contains_domain");
    const Subspace ds = dstar(p);
    const Matrix outside = p.dom_basis() - ds.projector() * p.dom_basis();
    t.record(range_leq(p.dom_basis(), ds.basis(), tol), k == 0 ? 0.0 : spectral_norm(outside));
    out.push_back(t.done());
  }
  if (!bound.exists) return out;

  const Matrix tn = kvn_extension(p);
  const Subspace d = p.domain();
  const double tn_scale = scale_of(tn);
  {
    Tally t("kvn_extends_operator");
    const double mismatch = k == 0 ? 0.0 : spectral_norm(tn * p.dom_basis() - p.image());
    t.record(is_extension(tn, p) && is_psd(tn, tol), mismatch / scale_of(p.image()));
    out.push_back(t.done());
  }
  {
    Tally t("kvn_norm_equals_gamma");
    const double gap = std::abs(spectral_norm(tn) - *bound.gamma);
    t.record(gap <= tol.residual * std::max(*bound.gamma, 1.0), gap);
    out.push_back(t.done());
  }
  {
    Tally param("kvn_below_parametrized_extensions");
    Tally indep("kvn_below_independent_extensions");
    for (int i = 0; i < budget.extensions(); ++i) {
      const Matrix s = sample_parametrized_extension(tn, d, rng);
      param.record(is_extension(s, p) && loewner_leq(tn, s, tol), psd_deficit(s - tn));

      const Matrix r = sample_independent_extension(p, rng);
      const Matrix diff = r - tn;
      const double leak = k == 0 ? 0.0 : spectral_norm(diff * p.dom_basis());
      indep.record(loewner_leq(tn, r, tol) && leak <= tol.residual * scale_of(r),
                   std::max(psd_deficit(diff), leak));
    }
    out.push_back(param.done());
    out.push_back(indep.done());
  }
  {
    Tally identity("qform_matches_kvn");
    Tally bound_check("qform_dominates_rayleigh_quotients");
    for (int i = 0; i < budget.probes(); ++i) {
      const Vector g = gaussian(n, 1, rng);
      const double form = qform_tn(p, g);
      const double direct = g.dot(tn * g);
      const double scale = tn_scale * g.squaredNorm();
      identity.record(std::abs(form - direct) <= 1e-8 * scale, std::abs(form - direct) / scale);
      if (k == 0) continue;
      const int per_probe = std::max(1, budget.rayleigh() / budget.probes());
      for (int j = 0; j < per_probe; ++j) {
        const Vector c = gaussian(k, 1, rng);
        const Vector th = p.image() * c;
        const double energy = c.dot(p.gram() * c);
        if (energy <= tol.rank_rel * std::max(scale_of(p.gram()), p.form_scale()) * c.squaredNorm()) continue;
        const double quotient = std::pow(g.dot(th), 2) / energy;
        const double excess = quotient - form;
        bound_check.record(excess <= 1e-8 * scale, std::max(0.0, excess) / scale);
      }
    }
    out.push_back(identity.done());
    out.push_back(bound_check.done());
  }
  {
    Tally t("characterization_matches_direct_test");
    const Matrix p_perp = complement_projector(d);
    for (int i = 0; i < budget.candidates(); ++i) {
      Matrix s;
      switch (i % 7) {
        case 0: s = sample_parametrized_extension(tn, d, rng, 0.2); break;
        case 1: s = sample_independent_extension(p, rng); break;
        case 2:
          s = tn;
          if (k > 0) {
            const Vector u = p.dom_basis() * random_unit(k, rng);
            s += uniform(1e-3, 1.0, rng) * u * u.transpose();
          }
          break;
        case 3: s = tn + p_perp * random_symmetric(n, rng) * p_perp; break;
        case 4: s = random_psd(n, uniform_index(1, n, rng), rng); break;
        case 5: s = tn + 1e-3 * random_symmetric(n, rng); break;
        default:
          s = tn;
          if (k > 0) {
            const Vector u = p.dom_basis() * random_unit(k, rng);
            s -= uniform(1e-3, 1.0, rng) * u * u.transpose();
          }
          break;
      }
      s = symmetrize(s);
      const bool psd = is_psd(s, tol);
      const bool characterized = psd && characterize_extension(s, p);
      t.agree(characterized == (psd && is_extension(s, p)));
    }
    out.push_back(t.done());
  }
  {
    Tally t("root_range_equality_iff_kvn");
    for (int i = 0; i < budget.extensions(); ++i) {
      const Matrix s = i % 2 == 0 ? sample_parametrized_extension(tn, d, rng, 0.3)
                                  : sample_independent_extension(p, rng);
      const bool equal = spectral_norm(s - tn) <= tol.residual * tn_scale;
      t.agree(kvn_range_criterion(s, p) == equal);
    }
    out.push_back(t.done());
  }
  {
    Tally t("sandwiched_operators_extend");
    for (int i = 0; i < budget.extensions(); ++i) {
      const Matrix r = sample_independent_extension(p, rng);
      const double lambda = uniform(0.0, 1.0, rng);
      const Matrix s = symmetrize(lambda * tn + (1.0 - lambda) * r);
      t.agree(verify_sandwich(p, r, s));
    }
    out.push_back(t.done());
  }
  return out;
}

CheckList verify_contraction(const ContractivePartial& c, Rng& rng, SampleBudget budget) {
  const ToleranceProfile& tol = c.tol();
  const Index n = c.ambient_dim();
  const Index k = c.domain_dim();
  const Matrix id = Matrix::Identity(n, n);
  CheckList out;

  const ExtensionInterval interval = extremal_extensions(c);
  auto extends = [&](const Matrix& s) {
    return k == 0 || spectral_norm(s * c.dom_basis() - c.image()) <=
                         tol.residual * scale_of(c.image());
  };
  {
    Tally t("extremal_extensions_are_contractive_extensions");
    for (const Matrix* s : {&interval.s_m, &interval.s_M}) {
      const double excess = std::max(0.0, spectral_norm(*s) - 1.0);
      const double asym = spectral_norm(*s - s->transpose());
      t.record(extends(*s) && excess <= tol.residual && asym <= tol.residual, std::max(excess, asym));
    }
    t.record(loewner_leq(interval.s_m, interval.s_M, tol), psd_deficit(interval.s_M - interval.s_m));
    out.push_back(t.done());
  }
  if (c.norm_attained()) {
    Tally t("extremal_extensions_have_norm_one");
    for (const Matrix* s : {&interval.s_m, &interval.s_M}) {
      const double gap = std::abs(spectral_norm(*s) - 1.0);
      t.record(gap <= tol.residual, gap);
    }
    out.push_back(t.done());
  }
  {
    Tally t("convex_combinations_are_members");
    for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const Matrix s = lambda * interval.s_m + (1.0 - lambda) * interval.s_M;
      const MembershipReport m = interval_membership(s, c, interval);
      t.agree(m.by_norm && m.by_interval);
    }
    out.push_back(t.done());
  }
  {
    // Chords through the midpoint: the feasible segment is located with the
    // norm alone, then points inside and outside it are classified by both
    // routes. Directions are H^{1/2} Z H^{1/2} with H the half-width, so the
    // chord is not pinched by flat directions of the interval; a collapsed
    // interval only admits the midpoint itself.
    Tally inside("norm_one_extensions_lie_in_interval");
    Tally outside("interval_members_are_norm_one_extensions");
    const Matrix mid = 0.5 * (interval.s_m + interval.s_M);
    const Matrix half = symmetrize(0.5 * (interval.s_M - interval.s_m));
    const bool collapsed = spectral_norm(half) <= tol.residual;
    const Matrix root = sqrt_psd(half, tol, 1.0);
    const Matrix q_perp = c.domain().orthogonal_complement().basis();
    auto feasible = [&](const Matrix& s) { return spectral_norm(s) <= 1.0 + tol.residual; };
    for (int i = 0; i < budget.extensions(); ++i) {
      if (n - k == 0) {
        const MembershipReport m = interval_membership(mid, c, interval);
        inside.agree(m.by_norm && m.by_interval);
        continue;
      }
      Matrix dir = collapsed ? Matrix(q_perp * random_symmetric(n - k, rng) * q_perp.transpose())
                             : Matrix(root * random_symmetric(n, rng) * root);
      dir = symmetrize(dir) / spectral_norm(dir);
      auto reach = [&](double sign) {
        double lo = 0.0;
        double hi = 4.0;
        if (!feasible(mid)) return 0.0;
        for (int it = 0; it < 60; ++it) {
          const double t = 0.5 * (lo + hi);
          (feasible(mid + sign * t * dir) ? lo : hi) = t;
        }
        return lo;
      };
      const double up = reach(1.0);
      const double down = reach(-1.0);
      const double t_in = collapsed ? 0.0 : uniform(-0.98 * down, 0.98 * up, rng);
      const MembershipReport in = interval_membership(symmetrize(mid + t_in * dir), c, interval);
      inside.agree(in.by_norm && in.by_interval);

      const double sign = uniform(0.0, 1.0, rng) < 0.5 ? 1.0 : -1.0;
      const double t_out = (sign > 0 ? up : down) + uniform(0.01, 0.5, rng);
      const MembershipReport out_report =
          interval_membership(symmetrize(mid + sign * t_out * dir), c, interval);
      outside.agree(!out_report.by_norm && !out_report.by_interval);
    }
    out.push_back(inside.done());
    out.push_back(outside.done());
  }
  {
    Tally t("midpoint_defect_identities");
    const PartialOperator plus = make_partial(c.dom_basis(), c.dom_basis() + c.image(), tol);
    const PartialOperator minus = make_partial(c.dom_basis(), c.dom_basis() - c.image(), tol);
    const Matrix mid = 0.5 * (interval.s_m + interval.s_M);
    const Matrix half_width = 0.5 * (interval.s_M - interval.s_m);
    const double gaps[] = {
        spectral_norm((id - mid) - kvn_extension(minus) - half_width),
        spectral_norm(interval.s_M - mid - half_width),
        spectral_norm(mid - interval.s_m - half_width),
        spectral_norm((id + mid) - kvn_extension(plus) - half_width),
    };
    for (double gap : gaps) t.record(gap <= tol.residual, gap);
    out.push_back(t.done());
  }
  UniquenessReport unique;
  {
    Tally t("uniqueness_routes_agree");
    try {
      unique = uniqueness_report(c);
      t.agree(true);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RouteMismatch) throw;
      t.agree(false);
    }
    out.push_back(t.done());
  }
  if (c.norm_attained() && n - k > 0 && unique.by_sup) {
    Tally t("supremum_finiteness_matches_uniqueness");
    const Matrix q_perp = c.domain().orthogonal_complement().basis();
    bool any_finite = false;
    for (Index j = 0; j < q_perp.cols() + budget.extensions(); ++j) {
      const Vector g = j < q_perp.cols() ? Vector(q_perp.col(j))
                                         : Vector(q_perp * random_unit(n - k, rng));
      const bool finite = std::isfinite(sup_qform(c, g));
      any_finite = any_finite || finite;
      if (unique.unique) t.agree(!finite);
    }
    if (any_finite) t.agree(!unique.unique);
    out.push_back(t.done());
  }
  return out;
}

CheckList verify_shorting(const Matrix& s, const Subspace& d, const ToleranceProfile& tol, Rng& rng,
                          SampleBudget budget) {
  const Index n = s.rows();
  const Index k = d.dim();
  const double s_scale = scale_of(s);
  CheckList out;

  const ShortedResult shorted = short_to(s, d, tol);
  {
    Tally t("shorted_is_psd_below_and_annihilates_subspace");
    const double leak = k == 0 ? 0.0 : spectral_norm(shorted.shorted * d.basis());
    t.record(is_psd(shorted.shorted, tol) && loewner_leq(shorted.shorted, s, tol) &&
                 leak <= tol.residual * s_scale,
             std::max({psd_deficit(shorted.shorted), psd_deficit(s - shorted.shorted), leak}));
    out.push_back(t.done());
  }
  {
    // Rotate D onto the leading coordinates and compare with the block formula.
    Tally t("shorted_matches_schur_complement");
    Matrix u(n, n);
    u << d.basis(), d.orthogonal_complement().basis();
    const Matrix rotated = symmetrize(u.transpose() * s * u);
    const Matrix schur = u * schur_oracle(rotated, k, tol) * u.transpose();
    const double gap = spectral_norm(schur - shorted.shorted);
    t.record(gap <= 1e-8 * s_scale, gap / s_scale);
    out.push_back(t.done());
  }
  {
    Tally closed("shorted_form_matches_infimum");
    Tally cloud("shorted_form_not_beaten_by_sampling");
    const int cloud_size = 20 * budget.base;
    for (int i = 0; i < budget.probes() / 4 + 1; ++i) {
      const Vector h = gaussian(n, 1, rng);
      const double scale = s_scale * h.squaredNorm();
      const double value = h.dot(shorted.shorted * h);
      const double infimum = shorted_qform_infimum(s, d, h, tol);
      closed.record(std::abs(value - infimum) <= 1e-8 * scale, std::abs(value - infimum) / scale);
      if (k == 0) continue;
      const Matrix restricted = d.basis().transpose() * s * d.basis();
      const Vector best = -pinv(restricted, tol, spectral_norm(s)) * (d.basis().transpose() * s * h);
      double lowest = std::numeric_limits<double>::infinity();
      for (int j = 0; j <= cloud_size; ++j) {
        Vector coeff = best;
        if (j > 0) coeff += std::pow(10.0, uniform(-4.0, 1.0, rng)) * gaussian(k, 1, rng);
        const Vector x = d.basis() * coeff + h;
        lowest = std::min(lowest, x.dot(s * x));
      }
      const double beaten = value - lowest;
      cloud.record(beaten <= 1e-8 * scale && lowest - value <= 1e-8 * scale,
                   std::abs(beaten) / scale);
    }
    out.push_back(closed.done());
    out.push_back(cloud.done());
  }
  {
    Tally t("shorted_root_range_identity");
    try {
      shorted_root_range(s, d, tol);
      t.agree(true);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RangeIdentityViolated) throw;
      t.agree(false);
    }
    out.push_back(t.done());
  }
  {
    // Operators below S with range in ran S^{1/2} ∩ D^⊥, scaled by bisection
    // against S alone, must stay below the shortening.
    Tally t("shorted_dominates_operators_below_in_complement");
    const std::array<Matrix, 2> parts{sqrt_psd(s, tol), complement_projector(d)};
    const Subspace room = range_intersect(parts, tol, std::sqrt(s_scale));
    for (int i = 0; i < budget.probes() / 4 + 1 && room.dim() > 0; ++i) {
      const Matrix w = room.basis() * random_psd(room.dim(), room.dim(), rng) * room.basis().transpose();
      double lo = 0.0;
      double hi = 1.0;
      while (loewner_leq(hi * w, s, tol) && hi < 1e12) hi *= 2.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (loewner_leq(mid * w, s, tol) ? lo : hi) = mid;
      }
      const Matrix below = symmetrize(0.99 * lo * w);
      t.record(shorted_monotone_floor(below, s, d, tol), psd_deficit(shorted.shorted - below));
    }
    out.push_back(t.done());
  }
  return out;
}

CheckList verify_equation(const Matrix& a, const Matrix& b, const ToleranceProfile& tol, Rng& rng,
                          SampleBudget budget) {
  CheckList out;
  const Solvability report = check_solvable(a, b, tol);
  {
    Tally t("solvability_report_consistent");
    t.agree(!(report.solvable && report.certificate.has_value()));
    t.agree(report.solvable == (report.well_defined && report.symmetric_form &&
                                report.positive_form && report.bounded_condition));
    out.push_back(t.done());
  }
  if (!report.solvable) {
    if (report.certificate) {
      Tally t("infeasibility_certificate_verifies");
      const Vector& x = *report.certificate;
      const Matrix gram = symmetrize(b.transpose() * a);
      const double form = std::abs(x.dot(gram * x));
      const double image = (b * x).norm();
      t.record(form <= tol.residual * std::max(spectral_norm(a) * spectral_norm(b), 1.0) && image > 10.0 * tol.residual * scale_of(b),
               form);
      out.push_back(t.done());
    }
    return out;
  }

  const Matrix sn = solve_min(a, b, tol);
  {
    Tally t("minimal_solution_residual");
    const double residual = spectral_norm(sn * a - b);
    t.record(residual <= tol.residual * scale_of(b) && is_psd(sn, tol), residual / scale_of(b));
    out.push_back(t.done());
  }
  // S*A = B with S PSD says S extends the operator A x -> B x.
  const PartialOperator as_operator = make_partial(a, b, tol);
  {
    Tally t("minimal_solution_matches_kvn");
    const double gap = spectral_norm(sn - kvn_extension(as_operator));
    t.record(gap <= tol.residual * scale_of(sn), gap);
    out.push_back(t.done());
  }
  {
    Tally t("minimal_solution_below_sampled_solutions");
    const Subspace d = as_operator.domain();
    for (int i = 0; i < budget.extensions(); ++i) {
      const Matrix s = i % 2 == 0 ? sample_parametrized_extension(sn, d, rng)
                                  : sample_independent_extension(as_operator, rng);
      const double residual = spectral_norm(s * a - b);
      t.record(residual <= tol.residual * scale_of(s) * std::max(spectral_norm(a), 1.0) &&
                   loewner_leq(sn, s, tol),
               psd_deficit(s - sn));
    }
    out.push_back(t.done());
  }
  return out;
}

}  // namespace krein
