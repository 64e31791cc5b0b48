// krein: command-line front end over the extension library.
//
//   krein <check|kvn|short|interval|unique|solve|verify-all> <instance|-> [options]
//   krein gen --kind <positive|contraction|psd_full|equation> --n N --k K --seed S

#include "krein/harness.hpp"
#include "krein/instance.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr const char* kToleranceEnv = "KREIN_TOLERANCE_FILE";

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) throw krein::Error(krein::ErrorKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "krein: cannot write '" << out_path << "'\n";
    return static_cast<int>(krein::Outcome::InvalidInput);
  }
  out << text;
  return 0;
}

krein::ToleranceProfile env_tolerances() {
  krein::ToleranceProfile base;
  if (const char* path = std::getenv(kToleranceEnv); path != nullptr && *path != '\0') {
    base = krein::parse_tolerance_file(slurp(path)).apply(base);
  }
  return base;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive and contractive extensions of operators given on a subspace"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string out_path;
  krein::RunOptions options;
  std::uint64_t seed = 0;
  double tol_rank = 0.0;
  double tol_psd = 0.0;
  double tol_residual = 0.0;

  const std::pair<const char*, const char*> commands[] = {
      {"check", "Decide whether a positive extension exists"},
      {"kvn", "Krein-von Neumann extension and its norm"},
      {"short", "Shorten full_operator to the span of the domain vectors"},
      {"interval", "Extremal contractive extensions s_m and s_M"},
      {"unique", "Uniqueness of the norm-one self-adjoint extension"},
      {"solve", "Minimal PSD solution of S*A = B"},
      {"verify-all", "Run every applicable cross-check"},
  };
  std::vector<CLI::App*> analysis;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("instance", instance_path, "Instance file, '-' for stdin")->required();
    sub->add_option("--tol-rank", tol_rank, "Relative singular-value cutoff")->check(CLI::PositiveNumber);
    sub->add_option("--tol-psd", tol_psd, "Allowed negative eigenvalue, relative")->check(CLI::PositiveNumber);
    sub->add_option("--tol-residual", tol_residual, "Relative residual bound")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Seed for sampling checks (default: instance seed)");
    sub->add_option("--samples", options.samples, "Base sample count for sampling checks")
        ->check(CLI::PositiveNumber);
    sub->add_option("-o,--output", out_path, "Write the report here instead of stdout");
    analysis.push_back(sub);
  }

  std::string kind = "positive";
  long long n = 0;
  long long k = 0;
  std::uint64_t gen_seed = 0;
  bool degenerate = false;
  CLI::App* gen = app.add_subcommand("gen", "Generate a deterministic random instance");
  gen->add_option("--kind", kind, "positive | contraction | psd_full | equation")
      ->check(CLI::IsMember({"positive", "contraction", "psd_full", "equation"}));
  gen->add_option("--n", n, "Ambient dimension")->required();
  gen->add_option("--k", k, "Domain dimension (columns of A for equation)")->required();
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_flag("--degenerate", degenerate, "Plant an obstruction to extension");
  gen->add_option("-o,--output", out_path, "Write the instance here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const krein::Instance inst =
          krein::gen_instance(krein::parse_kind(kind), n, k, gen_seed, degenerate);
      return emit(krein::write_instance(inst), out_path);
    }

    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--tol-rank")) options.flag_overrides.rank_rel = tol_rank;
    if (sub->count("--tol-psd")) options.flag_overrides.psd_slack = tol_psd;
    if (sub->count("--tol-residual")) options.flag_overrides.residual = tol_residual;
    if (sub->count("--seed")) options.seed = seed;
    options.base_tolerances = env_tolerances();

    krein::RunResult result;
    try {
      const krein::Instance inst = krein::parse_instance(slurp(instance_path));
      result = krein::run_command(sub->get_name(), inst, options);
    } catch (const krein::Error& e) {
      result.report.command = sub->get_name();
      result.report.notes.emplace_back(e.what());
      result.outcome = krein::outcome_for(e.kind());
    }
    for (const std::string& note : result.report.notes) std::cerr << "krein: " << note << '\n';
    if (int rc = emit(krein::format_report(result.report), out_path); rc != 0) return rc;
    return static_cast<int>(result.outcome);
  } catch (const krein::Error& e) {
    std::cerr << "krein: " << e.what() << '\n';
    return static_cast<int>(krein::outcome_for(e.kind()));
  }
}
