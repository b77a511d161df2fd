// Command line front end for the trust-region experiments.
//
//   tltr run      --data FILE --solver tltr --fine cp --ell-frac 0.3 --seeds 1,2,3 --out DIR
//   tltr compare  --data FILE --solvers tr,tltr,sn ...   (or --spec a.cfg --spec b.cfg)
//   tltr sweep    --data FILE --solver tltr --param ell --values 5,10,15 ...
//   tltr gen-synthetic --samples 500 --features 50 --seed 1 --out FILE
//
// Options may also come from a flat key = value file given with --config;
// command-line flags override the file.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tltr/experiment.hpp"

namespace {

using Options = std::map<std::string, std::string>;

const std::vector<std::pair<std::string, std::string>> kSpecOptions = {
    {"loss", "logistic | ls | ridge"},
    {"data", "LIBSVM dataset path"},
    {"lambda", "regularization weight (default 1/N)"},
    {"features", "feature count override"},
    {"solver", "tr | tltr | sn"},
    {"fine", "full-space QP solver: cp | stcg"},
    {"stcg-cap", "ST-CG iteration cap on the full space"},
    {"ell", "subspace dimension"},
    {"ell-frac", "subspace dimension as a fraction of n (rounded up)"},
    {"sketch", "gaussian | shash | coordinate"},
    {"s", "nonzeros per column for shash"},
    {"s-frac", "nonzeros per column as a fraction of ell"},
    {"seeds", "comma separated seeds"},
    {"grad-tol", "stop once |grad f| < tol (default 1e-7)"},
    {"max-iter", "iteration budget"},
    {"out", "output directory"},
    {"jobs", "worker threads across seeds"},
    {"label", "name used in tables"},
    {"delta0", "initial radius"},
    {"delta-max", "radius cap"},
    {"eta1", "acceptance threshold"},
    {"eta2", "expansion threshold"},
    {"gamma1", "strong shrink factor"},
    {"gamma2", "mild shrink factor"},
    {"grow", "expansion factor"},
    {"alpha-backtracks", "halvings tried for the subspace step"},
    {"redraw-on-reject", "redraw the sketch after a rejected step (true|false)"},
    {"sub-stcg-cap", "ST-CG cap in the subspace (0: ell)"},
    {"subspace", "enable the subspace step (true|false)"},
};

struct SpecFlags {
  Options values;
  std::string config;
  CLI::App* app = nullptr;

  void attach(CLI::App* sub) {
    app = sub;
    for (const auto& [name, help] : kSpecOptions) sub->add_option("--" + name, values[name], help);
    sub->add_option("--config", config, "key = value file with the same option names")
        ->check(CLI::ExistingFile);
  }

  Options collect() const {
    Options out;
    if (!config.empty()) {
      std::ifstream in(config);
      out = tltr::parse_key_values(in);
    }
    for (const auto& [name, help] : kSpecOptions) {
      if (app->count("--" + name) > 0) out[name] = values.at(name);
    }
    return out;
  }
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-level trust-region experiments with sketched subspaces"};
  app.require_subcommand(1);

  SpecFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "solve one configuration for every seed");
  run_flags.attach(run_cmd);

  SpecFlags compare_flags;
  std::string solvers;
  std::vector<std::string> spec_files;
  CLI::App* compare_cmd = app.add_subcommand("compare", "tabulate several solvers on one problem");
  compare_flags.attach(compare_cmd);
  compare_cmd->add_option("--solvers", solvers, "comma separated solvers sharing the other flags");
  compare_cmd->add_option("--spec", spec_files, "key = value spec file (repeatable)")
      ->check(CLI::ExistingFile);

  SpecFlags sweep_flags;
  std::string param;
  std::string values;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "vary one parameter");
  sweep_flags.attach(sweep_cmd);
  sweep_cmd->add_option("--param", param, "ell | ell-frac | s | s-frac | stcg-cap")->required();
  sweep_cmd->add_option("--values", values, "comma separated values")->required();

  tltr::SyntheticSpec synth;
  std::string synth_out;
  CLI::App* gen_cmd = app.add_subcommand("gen-synthetic", "write a seeded synthetic dataset");
  gen_cmd->add_option("--samples", synth.n_samples, "number of samples")->capture_default_str();
  gen_cmd->add_option("--features", synth.n_features, "number of features")->capture_default_str();
  gen_cmd->add_option("--noise", synth.label_noise, "label flip probability")->capture_default_str();
  gen_cmd->add_option("--seed", synth.seed, "generator seed")->capture_default_str();
  gen_cmd->add_option("--out", synth_out, "output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const tltr::ExperimentSpec spec = tltr::spec_from_options(run_flags.collect());
      const tltr::RunSummary summary = tltr::run(spec);
      std::cout << tltr::format_summary(summary);
    } else if (*compare_cmd) {
      const Options shared = compare_flags.collect();
      std::vector<tltr::ExperimentSpec> specs;
      for (const auto& file : spec_files) {
        std::ifstream in(file);
        Options opts = tltr::parse_key_values(in);
        for (const auto& [k, v] : shared) opts[k] = v;
        specs.push_back(tltr::spec_from_options(opts));
      }
      for (const auto& solver : split(solvers)) {
        Options opts = shared;
        opts["solver"] = solver;
        if (!opts.count("label")) opts["label"] = solver;
        tltr::ExperimentSpec spec = tltr::spec_from_options(opts);
        if (!spec.out_dir.empty()) spec.out_dir = (std::filesystem::path(spec.out_dir) / solver).string();
        specs.push_back(spec);
      }
      const auto rows = tltr::compare(specs);
      const std::string table = tltr::format_comparison(rows);
      std::cout << table;
      if (shared.count("out")) write_file(shared.at("out"), "comparison.txt", table);
    } else if (*sweep_cmd) {
      const Options opts = sweep_flags.collect();
      const tltr::ExperimentSpec base = tltr::spec_from_options(opts);
      std::vector<double> parsed;
      for (const auto& v : split(values)) {
        double x = 0.0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc() || ptr != v.data() + v.size()) {
          throw std::invalid_argument("--values: not a number: '" + v + "'");
        }
        parsed.push_back(x);
      }
      const auto kind = tltr::sweep_param_from_string(param);
      tltr::ExperimentSpec quiet = base;
      quiet.out_dir.clear();
      const auto rows = tltr::sweep(quiet, kind, parsed);
      const std::string table = tltr::format_sweep(kind, rows);
      std::cout << table;
      write_file(base.out_dir, "sweep.txt", table);
    } else if (*gen_cmd) {
      const tltr::Dataset d = tltr::make_synthetic(synth);
      std::ofstream out(synth_out);
      out << tltr::to_libsvm(d);
      if (!out) throw std::runtime_error("cannot write '" + synth_out + "'");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
