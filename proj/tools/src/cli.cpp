#include "levysp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>

#include "levysp/bench.hpp"
#include "levysp/errors.hpp"
#include "levysp/estimators.hpp"
#include "levysp/innovations.hpp"
#include "levysp/io.hpp"
#include "levysp/pdf_engine.hpp"
#include "levysp/sampler.hpp"

namespace levysp::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

struct InnovationFlags {
  std::string kind;
  std::optional<double> sigma, rate, amplitude_sigma, alpha, scale, gamma;
  bool calibrated = false;

  void attach(CLI::App& app) {
    app.add_option("--innovation", kind, "gaussian | compound_poisson | cauchy | stable | variance_gamma")
        ->check(CLI::IsMember({"gaussian", "compound_poisson", "cauchy", "stable", "variance_gamma"}));
    app.add_option("--sigma", sigma, "Gaussian standard deviation");
    app.add_option("--rate", rate, "compound-Poisson rate");
    app.add_option("--amplitude-sigma", amplitude_sigma, "compound-Poisson amplitude std. dev.");
    app.add_option("--alpha", alpha, "stability index in (0, 2)");
    app.add_option("--scale", scale, "stable scale c");
    app.add_option("--gamma", gamma, "variance-gamma rate");
    app.add_flag("--calibrated", calibrated, "entropy-calibrated parameters");
  }

  bool given() const { return !kind.empty(); }

  InnovationSpec build() const {
    if (kind.empty()) throw ConfigError("--innovation", "an innovation is required");
    if (calibrated) {
      if (sigma || rate || amplitude_sigma || alpha || scale || gamma) {
        throw ConfigError("--calibrated", "cannot be combined with explicit law parameters");
      }
      if (kind == "gaussian") return calibrated_spec(InnovationKind::Gaussian);
      if (kind == "cauchy") return calibrated_spec(InnovationKind::SymmetricAlphaStable);
      if (kind == "variance_gamma") return calibrated_spec(InnovationKind::VarianceGamma);
      throw UnsupportedError("no calibrated parameters for '" + kind + "'");
    }
    auto need = [](const std::optional<double>& v, const char* flag) {
      if (!v) throw ConfigError(flag, std::string(flag) + " is required for this innovation");
      return *v;
    };
    if (kind == "gaussian") return InnovationSpec::gaussian(need(sigma, "--sigma"));
    if (kind == "compound_poisson") {
      return InnovationSpec::compound_poisson(need(rate, "--rate"), need(amplitude_sigma, "--amplitude-sigma"));
    }
    if (kind == "cauchy") return InnovationSpec::cauchy(need(scale, "--scale"));
    if (kind == "stable") return InnovationSpec::stable(need(alpha, "--alpha"), need(scale, "--scale"));
    return InnovationSpec::variance_gamma(need(gamma, "--gamma"));
  }
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--in", "cannot open '" + path + "'");
  return in;
}

/// Innovation from flags, else from the observation file's metadata.
std::optional<InnovationSpec> resolve_spec(const InnovationFlags& flags, const std::optional<InnovationSpec>& meta) {
  if (flags.given()) return flags.build();
  return meta;
}

struct ObservationFile {
  Observations obs;
  std::optional<InnovationSpec> spec;
  std::optional<double> period;
};

ObservationFile load_observations(const std::string& path) {
  ObservationFile f;
  {
    auto in = open_input(path);
    f.obs = read_observations_csv(in);
  }
  // Metadata is optional; reuse the path reader's parser for it.
  auto in = open_input(path);
  std::string line;
  while (std::getline(in, line) && !line.empty() && line.front() == '#') {
    if (line.rfind("# innovation=", 0) == 0) f.spec = InnovationSpec::parse(line.substr(13));
    if (line.rfind("# T=", 0) == 0) f.period = std::stod(line.substr(4));
  }
  return f;
}

SamplePath load_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--truth", "cannot open '" + path + "'");
  return read_path_csv(in);
}

int cmd_simulate(const InnovationFlags& flags, std::size_t n, double T, std::uint64_t seed,
                 const std::optional<double>& noise_var, std::size_t stride, const std::string& out_path,
                 std::string obs_path, std::ostream& out) {
  const InnovationSpec spec = flags.build();
  if (stride == 0) throw ConfigError("--stride", "must be positive");
  const SamplePath path = simulate_path(spec, T, n * stride, seed);
  write_atomically(out_path, [&](std::ostream& os) { write_path_csv(os, path); });
  out << "wrote " << out_path << '\n';
  if (noise_var) {
    if (*noise_var < 0.0) throw ConfigError("--noise-var", "must be non-negative");
    if (obs_path.empty()) {
      const std::filesystem::path p(out_path);
      obs_path = (p.parent_path() / (p.stem().string() + ".obs.csv")).string();
    }
    const Observations obs = add_noise(path, std::sqrt(*noise_var), stride, seed);
    write_atomically(obs_path, [&](std::ostream& os) { write_observations_csv(os, obs, &path); });
    out << "wrote " << obs_path << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and estimation of sparse Levy processes", "levysp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LEVYSP_CLI_VERSION);

  InnovationFlags flags;
  std::size_t n = 0, stride = 1, grid_n = 4096;
  double T = 1.0, epsilon = 1.0;
  std::optional<double> noise_var, lambda, half_width;
  std::optional<std::uint64_t> seed;
  std::string out_path, obs_path, in_path, method_name, truth_path, marginals_dir, config_path, via = "auto";
  bool auto_lambda = false, dry_run = false;

  auto* simulate = app.add_subcommand("simulate", "Simulate a Levy process, optionally with noisy samples");
  flags.attach(*simulate);
  simulate->add_option("--n", n, "number of observation intervals")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--T", T, "sampling period")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "random seed");
  simulate->add_option("--noise-var", noise_var, "noise variance; writes observations when given");
  simulate->add_option("--stride", stride, "fine-grid nodes per observation")->check(CLI::PositiveNumber);
  simulate->add_option("--out", out_path, "path CSV")->required();
  simulate->add_option("--obs-out", obs_path, "observations CSV (default <out stem>.obs.csv)");

  auto* pdf = app.add_subcommand("pdf", "Tabulate the increment density");
  flags.attach(*pdf);
  pdf->add_option("--T", T, "sampling period")->check(CLI::PositiveNumber);
  pdf->add_option("--via", via, "auto | closed | char")->check(CLI::IsMember({"auto", "closed", "char"}));
  pdf->add_option("--grid-n", grid_n, "grid points (power of two)");
  pdf->add_option("--half-width", half_width, "grid half-width")->check(CLI::PositiveNumber);
  pdf->add_option("--out", out_path, "density CSV")->required();

  auto* den = app.add_subcommand("denoise", "Estimate a process from noisy samples");
  flags.attach(*den);
  den->add_option("--in", in_path, "observations CSV")->required();
  den->add_option("--method", method_name, "lmmse | tv | log | map | mmse")->required();
  den->add_option("--noise-var", noise_var, "override the noise variance recorded in the input");
  den->add_option("--lambda", lambda, "regularization weight")->check(CLI::PositiveNumber);
  den->add_option("--epsilon", epsilon, "Log penalty scale")->check(CLI::PositiveNumber);
  den->add_option("--grid-n", grid_n, "message-passing grid points (power of two)");
  den->add_option("--T", T, "sampling period (default: from input, else 1)")->check(CLI::PositiveNumber);
  den->add_flag("--auto-lambda", auto_lambda, "pick lambda by oracle search against --truth");
  den->add_option("--truth", truth_path, "noiseless path CSV; prints the SNR improvement");
  den->add_option("--marginals-dir", marginals_dir, "dump per-node posterior densities (mmse)");
  den->add_option("--out", out_path, "estimate CSV")->required();

  auto* interp = app.add_subcommand("interpolate", "Fill in the fine grid between noiseless samples");
  flags.attach(*interp);
  interp->add_option("--in", in_path, "observations CSV (noise variance 0)")->required();
  interp->add_option("--method", method_name, "linear | mmse")->check(CLI::IsMember({"linear", "mmse"}));
  interp->add_option("--grid-n", grid_n, "message-passing grid points (power of two)");
  interp->add_option("--T", T, "sampling period (default: from input, else 1)")->check(CLI::PositiveNumber);
  interp->add_option("--truth", truth_path, "noiseless fine-grid path CSV; prints the sup-norm error");
  interp->add_option("--out", out_path, "estimate CSV")->required();

  auto* bench = app.add_subcommand("benchmark", "Run an SNR-improvement sweep");
  bench->add_option("--config", config_path, "key = value experiment file")->required();
  bench->add_option("--out", out_path, "report CSV (JSON metadata goes next to it)");
  bench->add_flag("--dry-run", dry_run, "validate the config and exit");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << LEVYSP_CLI_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (simulate->parsed()) {
      if (!seed) err << "no --seed given; using seed " << kDefaultSeed << '\n';
      return cmd_simulate(flags, n, T, seed.value_or(kDefaultSeed), noise_var, stride, out_path, obs_path, out);
    }

    if (pdf->parsed()) {
      const InnovationSpec spec = flags.build();
      GridSpec grid = default_grid(spec, T);
      grid.num_points = grid_n;
      if (half_width) grid.half_width = *half_width;
      grid.validate();
      const bool closed = via == "closed" || (via == "auto" && has_closed_form(spec, T));
      const GridPdf table = closed ? increment_pdf_closed_form(spec, T, grid) : increment_pdf_char_inversion(spec, T, grid);
      write_atomically(out_path, [&](std::ostream& os) { table.write_csv(os); });
      out << "wrote " << out_path << '\n';
      return kOk;
    }

    if (den->parsed()) {
      ObservationFile file = load_observations(in_path);
      if (noise_var) {
        if (*noise_var < 0.0) throw ConfigError("--noise-var", "must be non-negative");
        file.obs.noise_variance = *noise_var;
      }
      if (den->count("--T") == 0 && file.period) T = *file.period;
      EstimatorConfig config;
      config.method = parse_method(method_name);
      config.epsilon = epsilon;
      config.grid.num_points = grid_n;
      config.grid.keep_marginals = !marginals_dir.empty();
      const std::optional<InnovationSpec> spec = resolve_spec(flags, file.spec);
      std::optional<SamplePath> truth;
      if (!truth_path.empty()) truth = load_truth(truth_path);

      if (is_variational(config.method)) {
        if (auto_lambda) {
          if (lambda) throw ConfigError("--auto-lambda", "cannot be combined with --lambda");
          if (!truth) throw ConfigError("--auto-lambda", "the oracle search needs --truth");
          const LambdaSearch found = search_lambda(config.method, *truth, file.obs, epsilon);
          config.reg_weight = found.lambda;
          out << "lambda=" << std::setprecision(10) << found.lambda << '\n';
          if (found.at_boundary) err << "warning: lambda search ended on the widened boundary\n";
        } else if (lambda) {
          config.reg_weight = *lambda;
        } else {
          throw ConfigError("--lambda", "method " + method_name + " needs --lambda or --auto-lambda");
        }
      } else if (lambda || auto_lambda) {
        throw ConfigError("--lambda", "method " + method_name + " takes no regularization weight");
      }
      if (!spec && (config.method == Method::Map || config.method == Method::Mmse)) {
        throw ConfigError("--innovation", "method " + method_name + " needs an innovation (flags or input metadata)");
      }

      const DenoiseResult result = denoise(file.obs, config, spec, T);
      write_atomically(out_path, [&](std::ostream& os) { write_result_csv(os, result); });
      if (!marginals_dir.empty()) {
        if (!result.posterior_marginals) throw ConfigError("--marginals-dir", "only mmse produces marginals");
        write_marginals(marginals_dir, result);
      }
      if (!result.converged) err << "warning: solver stopped before convergence\n";
      out << "wrote " << out_path << '\n';
      if (result.grid_step > 0.0) out << "grid_step=" << std::setprecision(10) << result.grid_step << '\n';
      if (truth) out << "snri_db=" << std::setprecision(10) << snr_improvement(*truth, file.obs, result) << '\n';
      return kOk;
    }

    if (interp->parsed()) {
      ObservationFile file = load_observations(in_path);
      if (interp->count("--T") == 0 && file.period) T = *file.period;
      DenoiseResult result;
      if (method_name.empty() || method_name == "mmse") {
        const std::optional<InnovationSpec> spec = resolve_spec(flags, file.spec);
        if (!spec) throw ConfigError("--innovation", "mmse interpolation needs an innovation (flags or input metadata)");
        BpGridOptions grid;
        grid.num_points = grid_n;
        result = mmse_interpolate(file.obs, *spec, T, grid);
      } else {
        result = linear_interpolate(file.obs);
      }
      write_atomically(out_path, [&](std::ostream& os) { write_result_csv(os, result); });
      out << "wrote " << out_path << '\n';
      if (!truth_path.empty()) {
        const SamplePath truth = load_truth(truth_path);
        if (truth.values.size() != result.estimate.size()) throw ConfigError("--truth", "length does not match the fine grid");
        double worst = 0.0;
        for (std::size_t i = 0; i < truth.values.size(); ++i) {
          worst = std::max(worst, std::abs(truth.values[i] - result.estimate[i]));
        }
        out << "max_abs_error=" << std::setprecision(10) << worst << '\n';
      }
      return kOk;
    }

    if (bench->parsed()) {
      const ExperimentConfig config = ExperimentConfig::load(config_path);
      if (dry_run) {
        out << "config ok: " << config.noise_variances.size() << " noise levels x " << config.methods.size()
            << " methods\n";
        return kOk;
      }
      if (out_path.empty()) throw ConfigError("--out", "required unless --dry-run");
      const BenchmarkReport report = run_experiment(config);
      std::filesystem::path json_path(out_path);
      json_path.replace_extension(".json");
      write_atomically(json_path, [&](std::ostream& os) { report.write_json(os); });
      write_atomically(out_path, [&](std::ostream& os) { report.write_csv(os); });
      out << "wrote " << out_path << " and " << json_path.string() << '\n';
      return kOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.key() << ": " << e.what() << '\n';
    return kUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
    return kUnsupported;
  } catch (const ResolutionError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace levysp::cli
