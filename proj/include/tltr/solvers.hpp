#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tltr/objective.hpp"
#include "tltr/qp.hpp"
#include "tltr/sketch.hpp"

namespace tltr {

enum class FineSolver { CauchyPoint, SteihaugToint };

std::string to_string(FineSolver s);

/// Trust-region constants. The radius update maps each ratio band to a
/// single point of the admissible interval: grow (capped at delta_max),
/// gamma2 * delta, or gamma1 * delta.
struct TrConfig {
  double delta0 = 1.0;
  double delta_max = 1e6;
  double eta1 = 0.1;
  double eta2 = 0.75;
  double gamma1 = 0.25;
  double gamma2 = 0.5;
  double grow = 2.0;
  double grad_tol = 1e-7;
  int max_iter = 1000;
  FineSolver fine_solver = FineSolver::SteihaugToint;
  int stcg_cap = 2;
  double stcg_rtol = 1e-6;

  void validate() const;
};

struct SubspaceConfig {
  /// When false no sketch is drawn and the method is plain TR.
  bool enabled = true;
  SketchSpec sketch;
  int alpha_max_backtracks = 5;
  bool redraw_on_reject = true;
  int stcg_cap = 0;  // 0: ell
  double stcg_rtol = 1e-10;

  void validate(Eigen::Index n) const;
};

struct SnConfig {
  double armijo_c = 1e-4;
  int max_backtracks = 50;
  double grad_tol = 1e-7;
  int max_iter = 1000;

  void validate() const;
};

enum class Termination { GradTol, MaxIter };

std::string to_string(Termination t);

/// State after iteration k (f and grad_norm at x_{k+1}) together with what
/// the iteration did. `delta` is the radius the step was computed with; the
/// sketched Newton baseline has no radius or ratio and stores NaN there.
struct IterationRecord {
  int k = 0;
  double f = 0.0;
  double grad_norm = 0.0;
  double delta = 0.0;
  double rho = 0.0;
  double rho_tr = 0.0;  // ratio of the smoothing step alone
  double reduction = 0.0;  // f(x_k) - f(x_{k+1}), computed directly; 0 when rejected
  bool accepted = false;
  bool subspace_used = false;
  bool fallback = false;  // SN only: gradient direction replaced the Newton step
  double alpha = 0.0;
  double fine_step_norm = 0.0;
  double sub_step_norm = 0.0;  // reduced-space norm |p_S|
  EvalCounts evals;
  std::uint64_t sketches = 0;

  /// Field-wise equality with NaN == NaN.
  friend bool operator==(const IterationRecord& a, const IterationRecord& b);
};

struct RunTrace {
  std::string solver;
  std::uint64_t seed = 0;
  double initial_f = 0.0;
  double initial_grad_norm = 0.0;
  std::vector<IterationRecord> records;
  Termination terminated_by = Termination::MaxIter;
  Vector final_x;
  EvalCounts evals;
  std::uint64_t sketches = 0;

  int iterations() const { return static_cast<int>(records.size()); }
};

/// Classical trust region: quadratic model at x_k, fine solver step p,
/// accept when (f(x_k) - f(x_k + p)) / (m(0) - m(p)) > eta1.
RunTrace tr_solve(const Objective& obj, const Vector& x0, const TrConfig& cfg);

/// Two-level trust region. Each iteration takes a smoothing step p_F on the
/// full quadratic model, then a subspace step p_S minimizing the sketched
/// model at x_k + p_F within the same radius. The prolongated step S^T p_S is
/// kept (scaled by a backtracked alpha) only if it strictly lowers f; the
/// composite step is judged by composite_rho.
RunTrace tltr_solve(const Objective& obj, const Vector& x0, const TrConfig& cfg,
                    const SubspaceConfig& sub, std::uint64_t seed);
RunTrace tltr_solve(const Objective& obj, const Vector& x0, const TrConfig& cfg,
                    const SubspaceConfig& sub, const SketchSource& sketches);

struct LineSearchResult {
  double alpha = 0.0;
  bool ok = false;
  double gain = 0.0;  // f(x) - f(x + alpha d) when ok
};

/// First alpha in {1, 1/2, ..., 2^-max_backtracks} with f(x + alpha d) < f(x),
/// decided on obj.reduction so that tiny gains are still resolved.
LineSearchResult line_search_alpha(const Objective& obj, const Vector& x, const Vector& d,
                                   int max_backtracks);

/// Ratio of actual to predicted reduction for the composite step:
///   (f_k - f_trial) / (model_decrease + f_half - f_after_sub).
/// Returns -infinity when the denominator is below 1e-15 max(1, |f_k|) or
/// any input is not finite, which the caller treats as a rejection.
double composite_rho(double f_k, double f_trial, double model_decrease, double f_half,
                     double f_after_sub);

/// The same ratio written in reductions, as the solvers use it:
///   (fine_reduction + sub_gain) / (model_decrease + sub_gain)
/// with fine_reduction = f_k - f_half and sub_gain = f_half - f_after_sub.
/// Returns -infinity for a non-finite input or a denominator that is not
/// positive.
double reduction_ratio(double fine_reduction, double model_decrease, double sub_gain);

double radius_update(double rho, double delta, const TrConfig& cfg);

/// Sketched Newton with Armijo backtracking: solve (S H S^T) q = -S g with a
/// dense LDL^T factorization and move along S^T q; falls back to -S^T S g
/// when the factorization is singular or the direction does not descend.
RunTrace sn_solve(const Objective& obj, const Vector& x0, const SubspaceConfig& sub,
                  const SnConfig& cfg, std::uint64_t seed);
RunTrace sn_solve(const Objective& obj, const Vector& x0, const SnConfig& cfg,
                  const SketchSource& sketches);

}  // namespace tltr
