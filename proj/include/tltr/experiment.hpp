#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tltr/dataset.hpp"
#include "tltr/losses.hpp"
#include "tltr/solvers.hpp"

namespace tltr {

enum class LossKind { Logistic, LeastSquares, Ridge };
enum class SolverKind { TR, TLTR, SN };

std::string to_string(LossKind k);
std::string to_string(SolverKind k);
LossKind loss_kind_from_string(const std::string& s);
SolverKind solver_kind_from_string(const std::string& s);

struct ProblemSpec {
  LossKind loss = LossKind::Logistic;
  std::string data_path;
  /// In-memory data; takes precedence over data_path when set.
  std::shared_ptr<const Dataset> dataset;
  std::optional<double> lambda;
  std::optional<Eigen::Index> n_features;

  /// Identity used to decide whether two specs describe the same problem.
  std::string id() const;
};

/// Subspace size given either absolutely or as a fraction of n (resp. ell),
/// rounded up. Unset s means max(1, ceil(ell / 10)).
struct SubspaceSizing {
  std::optional<Eigen::Index> ell;
  std::optional<double> ell_frac;
  std::optional<Eigen::Index> s;
  std::optional<double> s_frac;
};

struct ExperimentSpec {
  std::string label;  // defaults to the solver name
  ProblemSpec problem;
  SolverKind solver = SolverKind::TLTR;
  TrConfig tr;
  SubspaceConfig sub;
  SubspaceSizing sizing;
  SnConfig sn;
  std::vector<std::uint64_t> seeds{1};
  std::string out_dir;  // empty: no files written
  int jobs = 1;

  std::string display_label() const;
};

/// Loaded data with labels mapped for the loss.
struct Problem {
  ProblemSpec spec;
  std::shared_ptr<const Dataset> data;

  std::unique_ptr<Objective> make_objective() const;
};

Problem load_problem(const ProblemSpec& spec);

/// Resolves sizing against dimension n and validates the result.
SubspaceConfig resolve_subspace(const ExperimentSpec& spec, Eigen::Index n);

/// 0.1 * N(0, I) drawn from the seed's initial-guess substream.
Vector initial_guess(Eigen::Index n, std::uint64_t seed);

/// One solve, no I/O. The objective is created fresh so counters start at 0.
RunTrace run_single(const ExperimentSpec& spec, const Problem& problem, std::uint64_t seed);

struct CostLedger {
  EvalCounts total;
  std::uint64_t sketches = 0;
  std::vector<EvalCounts> per_iteration;  // increments per record
  std::vector<std::uint64_t> sketches_per_iteration;
};

CostLedger cost_ledger(const RunTrace& trace);

struct SeedResult {
  std::uint64_t seed = 0;
  RunTrace trace;
};

struct RunSummary {
  std::string label;
  std::string solver;
  std::string problem;
  std::vector<SeedResult> results;
};

/// Validates everything, then solves every seed (on `jobs` worker threads).
/// With an output directory, writes trace_<solver>_<seed>.csv,
/// trace_full_<solver>_<seed>.csv and summary.txt.
RunSummary run(const ExperimentSpec& spec);

void write_trace_csv(std::ostream& out, const RunTrace& trace);
void write_full_trace_csv(std::ostream& out, const RunTrace& trace);
std::string format_summary(const RunSummary& summary);

struct ComparisonRow {
  std::string label;
  std::string solver;
  std::size_t runs = 0;
  std::size_t converged = 0;
  double median_iterations = 0.0;
  int min_iterations = 0;
  int max_iterations = 0;
  double median_value_evals = 0.0;
  double median_gradient_evals = 0.0;
  double median_hess_vec_evals = 0.0;
};

ComparisonRow summarize(const RunSummary& summary);

/// Runs every spec and tabulates iterations and evaluation counts across
/// seeds. All specs must share one problem; at least two are required.
std::vector<ComparisonRow> compare(const std::vector<ExperimentSpec>& specs);
std::string format_comparison(const std::vector<ComparisonRow>& rows);

enum class SweepParam { Ell, EllFrac, S, SFrac, StcgCap };
SweepParam sweep_param_from_string(const std::string& s);
std::string to_string(SweepParam p);

struct SweepRow {
  double value = 0.0;
  std::optional<ComparisonRow> result;
  std::string error;
};

/// One row per value; a value that makes the spec invalid yields a row with
/// `error` set and the sweep continues.
std::vector<SweepRow> sweep(const ExperimentSpec& base, SweepParam param,
                            const std::vector<double>& values);
std::string format_sweep(SweepParam param, const std::vector<SweepRow>& rows);

/// Gaussian features scaled by 1/sqrt(n), labels sign(<w, z>) of a planted
/// separator w ~ N(0, I), each flipped with probability label_noise.
/// Labels are in {-1, +1}.
struct SyntheticSpec {
  Eigen::Index n_samples = 500;
  Eigen::Index n_features = 50;
  double label_noise = 0.1;
  std::uint64_t seed = 1;
};

Dataset make_synthetic(const SyntheticSpec& spec);

/// Flat `key = value` text; '#' starts a comment.
std::map<std::string, std::string> parse_key_values(std::istream& in);

/// Builds a spec from option names matching the CLI flags (without dashes):
/// loss, data, lambda, features, solver, fine, stcg-cap, ell, ell-frac,
/// sketch, s, s-frac, seeds, grad-tol, max-iter, out, jobs, label, delta0,
/// delta-max, eta1, eta2, gamma1, gamma2, grow, alpha-backtracks,
/// redraw-on-reject, sub-stcg-cap.
ExperimentSpec spec_from_options(const std::map<std::string, std::string>& options);

}  // namespace tltr
