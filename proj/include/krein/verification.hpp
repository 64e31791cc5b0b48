#pragma once

// Sampling-based cross-checks of every extension property the library
// implements. Each check pits a library route against an independent one and
// records the worst discrepancy seen.

#include "krein/contractive.hpp"
#include "krein/kvn.hpp"
#include "krein/partial_op.hpp"
#include "krein/sampling.hpp"

#include <string>
#include <vector>

namespace krein {

struct OracleCheck {
  std::string name;
  bool passed = true;
  double discrepancy = 0.0;  // always finite
};

using CheckList = std::vector<OracleCheck>;

/// Sample counts derived from a base count N (the CLI's --samples):
/// extensions N, quadratic-form probes 2N, Rayleigh quotients 4N,
/// characterization candidates 10N.
struct SampleBudget {
  int base = 50;
  int extensions() const { return base; }
  int probes() const { return 2 * base; }
  int rayleigh() const { return 4 * base; }
  int candidates() const { return 10 * base; }
};

/// T_N + P W P with P the projector onto D^⊥ and W random PSD of random rank
/// and scale; W = 0 with probability `exact_prob`.
Matrix sample_parametrized_extension(const Matrix& tn, const Subspace& d, Rng& rng,
                                     double exact_prob = 0.0);

/// A positive extension assembled blockwise in the coordinates (D, D^⊥):
/// the D^⊥ block is W + c I with c doubled until the whole matrix is PSD.
/// Does not use T_N. Requires an extendible operator.
Matrix sample_independent_extension(const PartialOperator& p, Rng& rng);

CheckList verify_partial(const PartialOperator& p, Rng& rng, SampleBudget budget = {});
CheckList verify_contraction(const ContractivePartial& c, Rng& rng, SampleBudget budget = {});
CheckList verify_shorting(const Matrix& s, const Subspace& d, const ToleranceProfile& tol, Rng& rng,
                          SampleBudget budget = {});
CheckList verify_equation(const Matrix& a, const Matrix& b, const ToleranceProfile& tol, Rng& rng,
                          SampleBudget budget = {});

bool all_passed(const CheckList& checks);

}  // namespace krein
