// softscale: synthesis, denoising, risk curves, experiment reproduction and
// the verification suite.
//
// Exit codes: 0 success, 1 verification checks failed, 2 usage error,
// 3 data error (unreadable input, nonconforming length, degenerate variance).

#include <filesystem>
#include <iomanip>
#include <limits>
#include <sstream>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "softscale/harness.hpp"
#include "softscale/signals.hpp"
#include "softscale/verify.hpp"

namespace fs = std::filesystem;
using namespace softscale;

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

DfConvention parse_df(const std::string& s) {
  if (s == "k-factor") return DfConvention::k_factor;
  if (s == "paper-literal") return DfConvention::constant;
  throw UsageError("--df-convention must be k-factor or paper-literal");
}

SspFormula parse_ssp(const std::string& s) {
  if (s == "orthonormal") return SspFormula::orthonormal;
  if (s == "paper-literal") return SspFormula::mixed_scale;
  throw UsageError("--ssp-formula must be orthonormal or paper-literal");
}

template <class Fn>
auto as_usage(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// --noise mad | known:<sigma2> | residual:<m>
void parse_noise(const std::string& spec, DenoiseOptions& opts) {
  if (spec == "mad") {
    opts.noise = NoiseMethod::mad;
    return;
  }
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  try {
    if (kind == "known" && !arg.empty()) {
      opts.noise = NoiseMethod::known;
      opts.known_sigma2 = std::stod(arg);
      return;
    }
    if (kind == "residual" && !arg.empty()) {
      opts.noise = NoiseMethod::residual_regression;
      opts.residual_span_size = std::stoul(arg);
      return;
    }
  } catch (const std::exception&) {
  }
  throw UsageError("--noise must be mad, known:<sigma2> or residual:<m>");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct SynthArgs {
  std::string kind = "heavisine";
  std::size_t n = 1024;
  double sigma2 = 1.0;
  std::optional<double> snr;
  std::uint64_t seed = 0;
  std::string out;
};

int run_synth(const SynthArgs& a) {
  TargetSpec spec;
  as_usage([&] {
    spec.kind = signal_kind_from_string(a.kind);
    spec.n = a.n;
    spec.sigma2 = a.sigma2;
    spec.snr = a.snr;
    if (spec.kind != SignalKind::trig) {
      spec.true_components.clear();
      spec.beta.clear();
    }
    spec.validate();
  });
  const std::vector<double> truth = synthesize_truth(spec);
  const std::vector<double> noisy = add_noise(truth, spec.sigma2, a.seed);
  write_signal_file(a.out, noisy);
  write_signal_file(a.out + ".truth", truth);
  nlohmann::json echo = {{"command", "synth"},
                         {"kind", a.kind},
                         {"n", a.n},
                         {"sigma2", a.sigma2},
                         {"snr", a.snr ? nlohmann::json(*a.snr) : nlohmann::json(nullptr)},
                         {"seed", a.seed},
                         {"out", a.out},
                         {"truth", a.out + ".truth"}};
  std::cout << echo.dump(2) << '\n';
  return 0;
}

struct DenoiseArgs {
  std::string in, out, transform = "dwt", method = "adaptive", noise = "mad";
  std::string df = "k-factor", ssp = "orthonormal", report;
  std::optional<std::size_t> kmax;
  int j0 = 2;
  bool exempt_approx = false;
};

int run_denoise(const DenoiseArgs& a) {
  DenoiseOptions opts;
  as_usage([&] {
    opts.transform = transform_from_string(a.transform);
    opts.method = method_from_string(a.method);
    opts.coarsest_level = a.j0;
    opts.exempt_approx = a.exempt_approx;
    opts.shrink.df_convention = parse_df(a.df);
    opts.shrink.ssp_formula = parse_ssp(a.ssp);
  });
  parse_noise(a.noise, opts);

  const std::vector<double> y = read_signal_file(a.in);
  if (y.empty()) throw std::runtime_error("input signal is empty");
  opts.shrink.kmax = a.kmax.value_or(std::min<std::size_t>(300, y.size() - 1));

  // Length problems are data errors here, not usage errors.
  const DenoiseResult result = denoise(y, opts);
  write_signal_file(a.out, result.output);

  nlohmann::json report = result.report();
  report["config"] = opts.to_json();
  report["config"]["in"] = a.in;
  report["config"]["out"] = a.out;
  if (!a.report.empty()) write_text(a.report, report.dump(2) + "\n");
  std::cout << report.dump(2) << '\n';
  return 0;
}

struct ExperimentArgs {
  std::string name;
  std::optional<std::size_t> reps;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  unsigned workers = 0;
  std::string df = "k-factor", ssp = "orthonormal";
  bool exempt_approx = false;
};

ExperimentConfig resolve_config(const ExperimentArgs& a) {
  return as_usage([&] {
    ExperimentConfig c = experiment_preset(a.name);
    if (a.reps) c.reps = *a.reps;
    c.base_seed = a.seed;
    c.workers = a.workers;
    c.shrink.df_convention = parse_df(a.df);
    c.shrink.ssp_formula = parse_ssp(a.ssp);
    c.exempt_approx = a.exempt_approx;
    c.validate();
    return c;
  });
}

int run_experiment_cmd(const ExperimentArgs& a) {
  const ExperimentConfig config = resolve_config(a);
  const McSummary summary = run_experiment(config);
  fs::create_directories(a.out_dir);
  const fs::path base = fs::path(a.out_dir) / a.name;
  {
    std::ofstream curves(base.string() + "_curves.csv");
    write_curves_csv(summary, curves);
    std::ofstream sel(base.string() + "_summary.csv");
    write_summary_csv(summary, sel);
    if (!curves || !sel) throw std::runtime_error("cannot write CSV output in " + a.out_dir);
  }
  write_text(base.string() + "_config.json", summary.metadata().dump(2) + "\n");

  nlohmann::json echo = summary.metadata();
  echo["outputs"] = {base.string() + "_curves.csv", base.string() + "_summary.csv",
                     base.string() + "_config.json"};
  std::cout << echo.dump(2) << '\n';
  return 0;
}

int run_risk_curve(const ExperimentArgs& a, const std::string& method_name, const std::string& out) {
  ExperimentConfig config = resolve_config(a);
  const Method method = as_usage([&] { return method_from_string(method_name); });
  if (method == Method::universal) throw UsageError("risk-curve: universal has no path");
  config.shrink.methods = {method};
  const McSummary summary = run_experiment(config);

  std::ostringstream csv;
  csv << std::setprecision(std::numeric_limits<double>::max_digits10);
  csv << "k,mean_criterion,mean_loss\n";
  for (const CurvePoint& p : curve_of(summary.at(method)))
    csv << p.k << ',' << p.mean_criterion << ',' << p.mean_loss << '\n';
  if (out.empty() || out == "-") {
    std::cout << csv.str();
  } else {
    write_text(out, csv.str());
    nlohmann::json echo = summary.metadata();
    echo["method"] = method_name;
    echo["out"] = out;
    std::cout << echo.dump(2) << '\n';
  }
  return 0;
}

int run_verify(std::uint64_t seed, const std::string& df, unsigned workers, const std::string& out) {
  VerifyOptions opts;
  opts.seed = seed;
  opts.df_convention = parse_df(df);
  opts.workers = workers;
  const nlohmann::json report = verify_all(opts);
  const std::string text = report.dump(2) + "\n";
  if (!out.empty()) write_text(out, text);
  std::cout << text;
  return report.at("all_passed").get<bool>() ? 0 : kExitChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-thresholding with adaptive scaling: denoising and Monte Carlo reproduction"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a noisy test signal and its .truth companion");
  synth_cmd->add_option("--kind", synth.kind, "trig | heavisine | blocks")->required();
  synth_cmd->add_option("--n", synth.n, "Sample count")->required();
  synth_cmd->add_option("--sigma2", synth.sigma2, "Noise variance")->capture_default_str();
  synth_cmd->add_option("--snr", synth.snr, "Rescale the clean signal to sd/sigma = snr");
  synth_cmd->add_option("--seed", synth.seed, "Noise seed")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output path")->required();

  DenoiseArgs den;
  auto* den_cmd = app.add_subcommand("denoise", "Denoise a signal file");
  den_cmd->add_option("--in", den.in, "Input signal file")->required();
  den_cmd->add_option("--out", den.out, "Output signal file")->required();
  den_cmd->add_option("--transform", den.transform, "trig | dwt")->capture_default_str();
  den_cmd->add_option("--method", den.method, "lst | ssp | adaptive | universal")->capture_default_str();
  den_cmd->add_option("--kmax", den.kmax, "Largest k examined (default min(300, n-1))");
  den_cmd->add_option("--noise", den.noise, "mad | known:<sigma2> | residual:<m>")->capture_default_str();
  den_cmd->add_option("--j0", den.j0, "Coarsest DWT level")->capture_default_str();
  den_cmd->add_option("--df-convention", den.df, "k-factor | paper-literal")->capture_default_str();
  den_cmd->add_option("--ssp-formula", den.ssp, "orthonormal | paper-literal")->capture_default_str();
  den_cmd->add_flag("--exempt-approx", den.exempt_approx, "Leave DWT approximation coefficients untouched");
  den_cmd->add_option("--report", den.report, "Also write the JSON report here");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a preloaded Monte Carlo experiment");
  exp_cmd->add_option("name", exp.name, "trig-table1 | wavelet-heavisine | wavelet-blocks")->required();
  exp_cmd->add_option("--reps", exp.reps, "Replications (default: preset)");
  exp_cmd->add_option("--seed", exp.seed, "Base seed")->capture_default_str();
  exp_cmd->add_option("--out-dir", exp.out_dir, "Directory for CSV output")->capture_default_str();
  exp_cmd->add_option("--workers", exp.workers, "Worker threads, 0 = all cores")->capture_default_str();
  exp_cmd->add_option("--df-convention", exp.df, "k-factor | paper-literal")->capture_default_str();
  exp_cmd->add_option("--ssp-formula", exp.ssp, "orthonormal | paper-literal")->capture_default_str();
  exp_cmd->add_flag("--exempt-approx", exp.exempt_approx, "Leave DWT approximation coefficients untouched");

  ExperimentArgs curve;
  std::string curve_method = "adaptive", curve_out;
  auto* curve_cmd = app.add_subcommand("risk-curve", "Mean criterion and loss per k for one method");
  curve_cmd->add_option("name", curve.name, "trig-table1 | wavelet-heavisine | wavelet-blocks")->required();
  curve_cmd->add_option("--method", curve_method, "lst | ssp | adaptive")->capture_default_str();
  curve_cmd->add_option("--reps", curve.reps, "Replications (default: preset)");
  curve_cmd->add_option("--seed", curve.seed, "Base seed")->capture_default_str();
  curve_cmd->add_option("--workers", curve.workers, "Worker threads, 0 = all cores")->capture_default_str();
  curve_cmd->add_option("--df-convention", curve.df, "k-factor | paper-literal")->capture_default_str();
  curve_cmd->add_option("--ssp-formula", curve.ssp, "orthonormal | paper-literal")->capture_default_str();
  curve_cmd->add_option("--out", curve_out, "CSV path (default stdout)");

  std::uint64_t verify_seed = 0;
  std::string verify_df = "k-factor", verify_out;
  unsigned verify_workers = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Run the statistical and algebraic verification suite");
  verify_cmd->add_option("--seed", verify_seed, "Base seed")->capture_default_str();
  verify_cmd->add_option("--df-convention", verify_df, "k-factor | paper-literal")->capture_default_str();
  verify_cmd->add_option("--workers", verify_workers, "Worker threads, 0 = all cores")->capture_default_str();
  verify_cmd->add_option("--out", verify_out, "Also write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth_cmd) return run_synth(synth);
    if (*den_cmd) return run_denoise(den);
    if (*exp_cmd) return run_experiment_cmd(exp);
    if (*curve_cmd) return run_risk_curve(curve, curve_method, curve_out);
    if (*verify_cmd) return run_verify(verify_seed, verify_df, verify_workers, verify_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
