#include "tltr/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tltr {

namespace {
constexpr std::uint64_t kInitialGuessStream = 0x7830000000000001ULL;
constexpr std::uint64_t kSyntheticStream = 0x73796e7468000001ULL;

std::string number(double v) {
  char buf[64];
  return std::string(buf, std::to_chars(buf, buf + sizeof(buf), v).ptr);
}
}  // namespace

std::string to_string(LossKind k) {
  switch (k) {
    case LossKind::Logistic: return "logistic";
    case LossKind::LeastSquares: return "ls";
    case LossKind::Ridge: return "ridge";
  }
  return "unknown";
}

std::string to_string(SolverKind k) {
  switch (k) {
    case SolverKind::TR: return "tr";
    case SolverKind::TLTR: return "tltr";
    case SolverKind::SN: return "sn";
  }
  return "unknown";
}

LossKind loss_kind_from_string(const std::string& s) {
  if (s == "logistic") return LossKind::Logistic;
  if (s == "ls") return LossKind::LeastSquares;
  if (s == "ridge") return LossKind::Ridge;
  throw std::invalid_argument("unknown loss '" + s + "' (expected logistic, ls or ridge)");
}

SolverKind solver_kind_from_string(const std::string& s) {
  if (s == "tr") return SolverKind::TR;
  if (s == "tltr") return SolverKind::TLTR;
  if (s == "sn") return SolverKind::SN;
  throw std::invalid_argument("unknown solver '" + s + "' (expected tr, tltr or sn)");
}

std::string ProblemSpec::id() const {
  std::string out = to_string(loss) + ':';
  if (dataset) {
    std::ostringstream addr;
    addr << "mem@" << dataset.get();
    out += addr.str();
  } else {
    out += data_path;
  }
  out += ":lambda=" + (lambda ? number(*lambda) : std::string("1/N"));
  if (n_features) out += ":n=" + std::to_string(*n_features);
  return out;
}

std::string ExperimentSpec::display_label() const {
  return label.empty() ? to_string(solver) : label;
}

// ---------------------------------------------------------------- problems

std::unique_ptr<Objective> Problem::make_objective() const {
  switch (spec.loss) {
    case LossKind::Logistic: return std::make_unique<LogisticLoss>(data, spec.lambda);
    case LossKind::LeastSquares: return std::make_unique<LeastSquaresLoss>(data, spec.lambda);
    case LossKind::Ridge: return std::make_unique<RidgeLoss>(data, spec.lambda);
  }
  throw std::logic_error("unknown loss kind");
}

Problem load_problem(const ProblemSpec& spec) {
  Dataset raw;
  if (spec.dataset) {
    raw = *spec.dataset;
  } else {
    if (spec.data_path.empty()) throw std::invalid_argument("no dataset given");
    raw = load_libsvm(spec.data_path, spec.n_features);
  }
  const LabelConvention convention =
      spec.loss == LossKind::Logistic ? LabelConvention::PlusMinusOne : LabelConvention::ZeroOne;
  Problem p;
  p.spec = spec;
  p.data = std::make_shared<const Dataset>(map_labels(raw, convention));
  p.make_objective();  // surfaces lambda/label errors before any solve
  return p;
}

SubspaceConfig resolve_subspace(const ExperimentSpec& spec, Eigen::Index n) {
  SubspaceConfig sub = spec.sub;
  const SubspaceSizing& z = spec.sizing;
  if (z.ell) {
    sub.sketch.ell = *z.ell;
  } else if (z.ell_frac) {
    if (!(*z.ell_frac > 0.0)) throw std::invalid_argument("ell-frac must be positive");
    sub.sketch.ell = static_cast<Eigen::Index>(std::ceil(*z.ell_frac * static_cast<double>(n)));
  }
  if (z.s) {
    sub.sketch.s = *z.s;
  } else if (z.s_frac) {
    if (!(*z.s_frac > 0.0)) throw std::invalid_argument("s-frac must be positive");
    sub.sketch.s = std::max<Eigen::Index>(
        1, static_cast<Eigen::Index>(std::ceil(*z.s_frac * static_cast<double>(sub.sketch.ell))));
  }
  if (z.s && *z.s < 1) throw std::invalid_argument("s must be >= 1");
  SubspaceConfig check = sub;
  check.enabled = true;
  check.validate(n);
  return sub;
}

Vector initial_guess(Eigen::Index n, std::uint64_t seed) {
  Rng rng = substream(seed, kInitialGuessStream, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = 0.1 * normal(rng);
  return x;
}

RunTrace run_single(const ExperimentSpec& spec, const Problem& problem, std::uint64_t seed) {
  const auto objective = problem.make_objective();
  const Eigen::Index n = objective->dimension();
  const Vector x0 = initial_guess(n, seed);
  RunTrace trace;
  switch (spec.solver) {
    case SolverKind::TR: trace = tr_solve(*objective, x0, spec.tr); break;
    case SolverKind::TLTR:
      trace = tltr_solve(*objective, x0, spec.tr,
                         spec.sub.enabled ? resolve_subspace(spec, n) : spec.sub, seed);
      break;
    case SolverKind::SN: trace = sn_solve(*objective, x0, resolve_subspace(spec, n), spec.sn, seed); break;
  }
  trace.seed = seed;
  return trace;
}

CostLedger cost_ledger(const RunTrace& trace) {
  CostLedger ledger;
  ledger.total = trace.evals;
  ledger.sketches = trace.sketches;
  EvalCounts prev{1, 1, 0};  // initial value and gradient
  std::uint64_t prev_sketches = 0;
  for (const auto& r : trace.records) {
    ledger.per_iteration.push_back(r.evals - prev);
    ledger.sketches_per_iteration.push_back(r.sketches - prev_sketches);
    prev = r.evals;
    prev_sketches = r.sketches;
  }
  return ledger;
}

// --------------------------------------------------------------------- run

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "Iteration,GradNorm\n";
  out << "0," << number(trace.initial_grad_norm) << '\n';
  for (const auto& r : trace.records) out << r.k + 1 << ',' << number(r.grad_norm) << '\n';
}

void write_full_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "Iteration,F,GradNorm,Delta,Rho,RhoTR,Reduction,Alpha,Accepted,SubspaceUsed,Fallback,"
         "FineStepNorm,SubStepNorm,NValue,NGradient,NHessVec,NSketch\n";
  const std::string nan = number(std::numeric_limits<double>::quiet_NaN());
  out << "0," << number(trace.initial_f) << ',' << number(trace.initial_grad_norm) << ','
      << nan << ',' << nan << ',' << nan << ",0," << nan << ",0,0,0,0,0,1,1,0,0\n";
  for (const auto& r : trace.records) {
    out << r.k + 1 << ',' << number(r.f) << ',' << number(r.grad_norm) << ',' << number(r.delta)
        << ',' << number(r.rho) << ',' << number(r.rho_tr) << ',' << number(r.reduction) << ','
        << number(r.alpha) << ','
        << int(r.accepted) << ',' << int(r.subspace_used) << ',' << int(r.fallback) << ','
        << number(r.fine_step_norm) << ',' << number(r.sub_step_norm) << ',' << r.evals.value
        << ',' << r.evals.gradient << ',' << r.evals.hess_vec << ',' << r.sketches << '\n';
  }
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

void validate_spec(const ExperimentSpec& spec, Eigen::Index n) {
  if (spec.seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (spec.jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  switch (spec.solver) {
    case SolverKind::TR: spec.tr.validate(); break;
    case SolverKind::TLTR:
      spec.tr.validate();
      if (spec.sub.enabled) resolve_subspace(spec, n);
      break;
    case SolverKind::SN:
      spec.sn.validate();
      resolve_subspace(spec, n);
      break;
  }
}

template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

RunSummary run(const ExperimentSpec& spec) {
  const Problem problem = load_problem(spec.problem);
  validate_spec(spec, problem.data->n_features());

  RunSummary summary;
  summary.label = spec.display_label();
  summary.solver = to_string(spec.solver);
  summary.problem = spec.problem.id();
  summary.results.resize(spec.seeds.size());

  parallel_for(spec.seeds.size(), spec.jobs, [&](std::size_t i) {
    summary.results[i].seed = spec.seeds[i];
    summary.results[i].trace = run_single(spec, problem, spec.seeds[i]);
  });

  if (!spec.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(spec.out_dir);
    const std::string tag = summary.solver;
    for (const auto& r : summary.results) {
      const std::string suffix = tag + '_' + std::to_string(r.seed) + ".csv";
      std::ofstream trace(fs::path(spec.out_dir) / ("trace_" + suffix));
      write_trace_csv(trace, r.trace);
      std::ofstream full(fs::path(spec.out_dir) / ("trace_full_" + suffix));
      write_full_trace_csv(full, r.trace);
      if (!trace || !full) throw std::runtime_error("failed writing traces to " + spec.out_dir);
    }
    std::ofstream out(fs::path(spec.out_dir) / "summary.txt");
    out << format_summary(summary);
    if (!out) throw std::runtime_error("failed writing summary to " + spec.out_dir);
  }
  return summary;
}

std::string format_summary(const RunSummary& summary) {
  std::ostringstream out;
  out << "label=" << summary.label << '\n';
  out << "solver=" << summary.solver << '\n';
  out << "problem=" << summary.problem << '\n';
  out << "seeds=";
  for (std::size_t i = 0; i < summary.results.size(); ++i) {
    out << (i ? "," : "") << summary.results[i].seed;
  }
  out << '\n';
  for (const auto& r : summary.results) {
    const std::string key = "seed." + std::to_string(r.seed) + '.';
    const RunTrace& t = r.trace;
    const double g = t.records.empty() ? t.initial_grad_norm : t.records.back().grad_norm;
    const double f = t.records.empty() ? t.initial_f : t.records.back().f;
    out << key << "iterations=" << t.iterations() << '\n';
    out << key << "terminated_by=" << to_string(t.terminated_by) << '\n';
    out << key << "final_grad_norm=" << number(g) << '\n';
    out << key << "final_f=" << number(f) << '\n';
    out << key << "n_f=" << t.evals.value << '\n';
    out << key << "n_grad=" << t.evals.gradient << '\n';
    out << key << "n_hessvec=" << t.evals.hess_vec << '\n';
    out << key << "n_sketch=" << t.sketches << '\n';
  }
  const ComparisonRow row = summarize(summary);
  out << "converged=" << row.converged << '/' << row.runs << '\n';
  out << "iterations.median=" << number(row.median_iterations) << '\n';
  out << "iterations.min=" << row.min_iterations << '\n';
  out << "iterations.max=" << row.max_iterations << '\n';
  return out.str();
}

ComparisonRow summarize(const RunSummary& summary) {
  ComparisonRow row;
  row.label = summary.label;
  row.solver = summary.solver;
  row.runs = summary.results.size();
  std::vector<double> its, nf, ng, nh;
  for (const auto& r : summary.results) {
    its.push_back(r.trace.iterations());
    nf.push_back(static_cast<double>(r.trace.evals.value));
    ng.push_back(static_cast<double>(r.trace.evals.gradient));
    nh.push_back(static_cast<double>(r.trace.evals.hess_vec));
    if (r.trace.terminated_by == Termination::GradTol) ++row.converged;
  }
  if (!its.empty()) {
    row.min_iterations = static_cast<int>(*std::min_element(its.begin(), its.end()));
    row.max_iterations = static_cast<int>(*std::max_element(its.begin(), its.end()));
  }
  row.median_iterations = median(its);
  row.median_value_evals = median(nf);
  row.median_gradient_evals = median(ng);
  row.median_hess_vec_evals = median(nh);
  return row;
}

std::vector<ComparisonRow> compare(const std::vector<ExperimentSpec>& specs) {
  if (specs.size() < 2) throw std::invalid_argument("compare needs at least two specs");
  const std::string problem = specs.front().problem.id();
  for (const auto& s : specs) {
    if (s.problem.id() != problem) {
      throw std::invalid_argument("compare: specs use different problems (" + problem + " vs " +
                                  s.problem.id() + ")");
    }
  }
  // Validate all before running any.
  const Problem loaded = load_problem(specs.front().problem);
  for (const auto& s : specs) validate_spec(s, loaded.data->n_features());

  std::vector<ComparisonRow> rows;
  for (const auto& s : specs) rows.push_back(summarize(run(s)));
  return rows;
}

std::string format_comparison(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(24) << "label" << std::setw(7) << "solver" << std::right
      << std::setw(10) << "converged" << std::setw(10) << "med_it" << std::setw(8) << "min_it"
      << std::setw(8) << "max_it" << std::setw(12) << "med_f" << std::setw(12) << "med_grad"
      << std::setw(12) << "med_hv" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(24) << r.label << std::setw(7) << r.solver << std::right
        << std::setw(10) << (std::to_string(r.converged) + '/' + std::to_string(r.runs))
        << std::setw(10) << r.median_iterations << std::setw(8) << r.min_iterations
        << std::setw(8) << r.max_iterations << std::setw(12) << r.median_value_evals
        << std::setw(12) << r.median_gradient_evals << std::setw(12) << r.median_hess_vec_evals
        << '\n';
  }
  return out.str();
}

// ------------------------------------------------------------------- sweep

SweepParam sweep_param_from_string(const std::string& s) {
  if (s == "ell") return SweepParam::Ell;
  if (s == "ell-frac") return SweepParam::EllFrac;
  if (s == "s") return SweepParam::S;
  if (s == "s-frac") return SweepParam::SFrac;
  if (s == "stcg-cap" || s == "stcg_cap") return SweepParam::StcgCap;
  throw std::invalid_argument("unknown sweep parameter '" + s + "'");
}

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::Ell: return "ell";
    case SweepParam::EllFrac: return "ell-frac";
    case SweepParam::S: return "s";
    case SweepParam::SFrac: return "s-frac";
    case SweepParam::StcgCap: return "stcg-cap";
  }
  return "unknown";
}

std::vector<SweepRow> sweep(const ExperimentSpec& base, SweepParam param,
                            const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  if (param != SweepParam::StcgCap && base.solver == SolverKind::TR) {
    throw std::invalid_argument("sweep: parameter " + to_string(param) +
                                " has no effect on the tr solver");
  }
  std::vector<SweepRow> rows;
  for (const double v : values) {
    SweepRow row;
    row.value = v;
    ExperimentSpec spec = base;
    std::ostringstream lbl;
    lbl << base.display_label() << '[' << to_string(param) << '=' << v << ']';
    spec.label = lbl.str();
    auto as_count = [&](double x) {
      if (x != std::floor(x)) throw std::invalid_argument(to_string(param) + " must be an integer");
      return static_cast<Eigen::Index>(x);
    };
    try {
      switch (param) {
        case SweepParam::Ell:
          spec.sizing.ell = as_count(v);
          spec.sizing.ell_frac.reset();
          break;
        case SweepParam::EllFrac:
          spec.sizing.ell_frac = v;
          spec.sizing.ell.reset();
          break;
        case SweepParam::S:
          spec.sizing.s = as_count(v);
          spec.sizing.s_frac.reset();
          break;
        case SweepParam::SFrac:
          spec.sizing.s_frac = v;
          spec.sizing.s.reset();
          break;
        case SweepParam::StcgCap: spec.tr.stcg_cap = static_cast<int>(as_count(v)); break;
      }
      row.result = summarize(run(spec));
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_sweep(SweepParam param, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(10) << to_string(param) << std::right << std::setw(10)
      << "converged" << std::setw(10) << "med_it" << std::setw(8) << "min_it" << std::setw(8)
      << "max_it" << std::setw(12) << "med_f" << std::setw(12) << "med_hv" << "  error\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(10) << r.value << std::right;
    if (r.result) {
      out << std::setw(10) << (std::to_string(r.result->converged) + '/' + std::to_string(r.result->runs))
          << std::setw(10) << r.result->median_iterations << std::setw(8) << r.result->min_iterations
          << std::setw(8) << r.result->max_iterations << std::setw(12)
          << r.result->median_value_evals << std::setw(12) << r.result->median_hess_vec_evals << '\n';
    } else {
      out << std::setw(10) << '-' << std::setw(10) << '-' << std::setw(8) << '-' << std::setw(8)
          << '-' << std::setw(12) << '-' << std::setw(12) << '-' << "  " << r.error << '\n';
    }
  }
  return out.str();
}

// --------------------------------------------------------------- synthetic

Dataset make_synthetic(const SyntheticSpec& spec) {
  if (spec.n_samples < 1 || spec.n_features < 1) {
    throw std::invalid_argument("synthetic: need at least one sample and one feature");
  }
  if (!(spec.label_noise >= 0.0 && spec.label_noise <= 0.5)) {
    throw std::invalid_argument("synthetic: label_noise must be in [0, 0.5]");
  }
  Rng rng = substream(spec.seed, kSyntheticStream, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution flip(spec.label_noise);

  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.n_features));
  Vector w(spec.n_features);
  for (Eigen::Index j = 0; j < w.size(); ++j) w[j] = normal(rng);

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(spec.n_samples * spec.n_features));
  Vector labels(spec.n_samples);
  Vector z(spec.n_features);
  for (Eigen::Index i = 0; i < spec.n_samples; ++i) {
    for (Eigen::Index j = 0; j < spec.n_features; ++j) {
      z[j] = scale * normal(rng);
      entries.emplace_back(i, j, z[j]);
    }
    double y = w.dot(z) >= 0.0 ? 1.0 : -1.0;
    if (flip(rng)) y = -y;
    labels[i] = y;
  }
  SparseRowMatrix features(spec.n_samples, spec.n_features);
  features.setFromTriplets(entries.begin(), entries.end());
  return Dataset(std::move(features), std::move(labels));
}

// ------------------------------------------------------------------ config

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

namespace {

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("option '" + key + "': not a number: '" + v + "'");
  }
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("option '" + key + "': not an integer: '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("option '" + key + "': not a boolean: '" + v + "'");
}

}  // namespace

ExperimentSpec spec_from_options(const std::map<std::string, std::string>& options) {
  static const std::set<std::string> known = {
      "loss",  "data",     "lambda",   "features", "solver", "fine",   "stcg-cap",
      "ell",   "ell-frac", "sketch",   "s",        "s-frac", "seeds",  "grad-tol",
      "max-iter", "out",   "jobs",     "label",    "delta0", "delta-max", "eta1",
      "eta2",  "gamma1",   "gamma2",   "grow",     "alpha-backtracks", "redraw-on-reject",
      "sub-stcg-cap", "subspace"};
  for (const auto& [k, v] : options) {
    if (!known.count(k)) throw std::invalid_argument("unknown option '" + k + "'");
  }

  ExperimentSpec spec;
  auto get = [&](const std::string& k) -> const std::string* {
    const auto it = options.find(k);
    return it == options.end() ? nullptr : &it->second;
  };

  if (auto v = get("loss")) spec.problem.loss = loss_kind_from_string(*v);
  if (auto v = get("data")) spec.problem.data_path = *v;
  if (auto v = get("lambda")) spec.problem.lambda = to_double("lambda", *v);
  if (auto v = get("features")) spec.problem.n_features = to_int("features", *v);
  if (auto v = get("solver")) spec.solver = solver_kind_from_string(*v);
  if (auto v = get("label")) spec.label = *v;
  if (auto v = get("out")) spec.out_dir = *v;
  if (auto v = get("jobs")) spec.jobs = static_cast<int>(to_int("jobs", *v));

  if (auto v = get("fine")) {
    if (*v == "cp") spec.tr.fine_solver = FineSolver::CauchyPoint;
    else if (*v == "stcg") spec.tr.fine_solver = FineSolver::SteihaugToint;
    else throw std::invalid_argument("unknown fine solver '" + *v + "' (expected cp or stcg)");
  }
  if (auto v = get("stcg-cap")) spec.tr.stcg_cap = static_cast<int>(to_int("stcg-cap", *v));
  if (auto v = get("delta0")) spec.tr.delta0 = to_double("delta0", *v);
  if (auto v = get("delta-max")) spec.tr.delta_max = to_double("delta-max", *v);
  if (auto v = get("eta1")) spec.tr.eta1 = to_double("eta1", *v);
  if (auto v = get("eta2")) spec.tr.eta2 = to_double("eta2", *v);
  if (auto v = get("gamma1")) spec.tr.gamma1 = to_double("gamma1", *v);
  if (auto v = get("gamma2")) spec.tr.gamma2 = to_double("gamma2", *v);
  if (auto v = get("grow")) spec.tr.grow = to_double("grow", *v);
  if (auto v = get("grad-tol")) {
    spec.tr.grad_tol = to_double("grad-tol", *v);
    spec.sn.grad_tol = spec.tr.grad_tol;
  }
  if (auto v = get("max-iter")) {
    spec.tr.max_iter = static_cast<int>(to_int("max-iter", *v));
    spec.sn.max_iter = spec.tr.max_iter;
  }

  if (auto v = get("sketch")) spec.sub.sketch.kind = sketch_kind_from_string(*v);
  if (auto v = get("ell")) spec.sizing.ell = to_int("ell", *v);
  if (auto v = get("ell-frac")) spec.sizing.ell_frac = to_double("ell-frac", *v);
  if (auto v = get("s")) spec.sizing.s = to_int("s", *v);
  if (auto v = get("s-frac")) spec.sizing.s_frac = to_double("s-frac", *v);
  if (spec.sizing.ell && spec.sizing.ell_frac) throw std::invalid_argument("give ell or ell-frac, not both");
  if (spec.sizing.s && spec.sizing.s_frac) throw std::invalid_argument("give s or s-frac, not both");
  if (!spec.sizing.ell && !spec.sizing.ell_frac) spec.sizing.ell_frac = 0.25;
  if (auto v = get("alpha-backtracks")) {
    spec.sub.alpha_max_backtracks = static_cast<int>(to_int("alpha-backtracks", *v));
  }
  if (auto v = get("redraw-on-reject")) spec.sub.redraw_on_reject = to_bool("redraw-on-reject", *v);
  if (auto v = get("sub-stcg-cap")) spec.sub.stcg_cap = static_cast<int>(to_int("sub-stcg-cap", *v));
  if (auto v = get("subspace")) spec.sub.enabled = to_bool("subspace", *v);

  if (auto v = get("seeds")) {
    spec.seeds.clear();
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const long long seed = to_int("seeds", item);
      if (seed < 0) throw std::invalid_argument("seeds must be non-negative");
      spec.seeds.push_back(static_cast<std::uint64_t>(seed));
    }
    if (spec.seeds.empty()) throw std::invalid_argument("seeds list is empty");
  }
  return spec;
}

}  // namespace tltr
