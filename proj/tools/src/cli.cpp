#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>

#include "oup/ar_baseline.hpp"
#include "oup/covariance.hpp"
#include "oup/errors.hpp"
#include "oup/estimate.hpp"
#include "oup/model_json.hpp"
#include "oup/parallel.hpp"
#include "oup/predict.hpp"
#include "oup/simulate.hpp"
#include "text_io.hpp"

namespace oup::cli {

namespace {

constexpr int kGridSamplerLimit = 5000;

struct Streams {
  std::ostream& out;
  std::ostream& err;

  // Summaries share stdout only when no machine output is written there.
  [[nodiscard]] std::ostream& summary(const std::string& output) const { return output == "-" ? err : out; }
};

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ", ";
    std::ostringstream e;
    e << std::setprecision(6) << v[i];
    s += e.str();
  }
  return s;
}

void print_kappa(std::ostream& os, std::span<const double> phi) {
  const auto rates = rates_from_phi(phi);
  os << "  kappa:";
  for (const auto& k : rates) os << ' ' << format_complex(k);
  os << '\n';
}

struct FitArgs {
  std::string data;
  std::string output = "-";
  std::string report;
  std::string method = "mce";
  std::string mean = "sample";
  std::string init;
  int order = 0;
  int T = 0;
  std::optional<int> starts;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  double tau = 1.0;
};

int cmd_fit(const FitArgs& a, const Streams& io) {
  const auto x = ingest_csv(a.data, a.tau, MeanPolicy::parse(a.mean));
  const auto method = parse_fit_method(a.method);
  FitResult fit;
  if (method == FitMethod::Mce) {
    MceOptions options;
    options.T = a.T;
    options.starts = a.starts.value_or(options.starts);
    options.seed = a.seed.value_or(options.seed);
    options.threads = a.threads;
    fit = mce_fit(x, a.order, options);
  } else {
    const auto variant = method == FitMethod::MleDiff ? LikelihoodVariant::Diff : LikelihoodVariant::Centered;
    std::optional<OuModel> init;
    if (!a.init.empty()) init = read_model(a.init);
    MleOptions options;
    options.starts = a.starts.value_or(options.starts);
    options.seed = a.seed.value_or(options.seed);
    options.threads = a.threads;
    fit = mle_fit(x, a.order, variant, init, options);
  }

  const auto doc = model_to_json(fit.model);
  write_to(a.output, io.out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  if (!a.report.empty()) {
    nlohmann::json report{{"method", to_string(fit.method)}, {"objective", fit.objective},
                          {"T", fit.T},                     {"iterations", fit.iterations},
                          {"converged", fit.converged},     {"n", x.size()},
                          {"tau", x.tau()},                 {"model", doc}};
    auto& rates = report["kappa"] = nlohmann::json::array();
    for (const auto& k : rates_from_phi(fit.model.phi)) rates.push_back({k.real(), k.imag()});
    write_to(a.report, io.out, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
  }

  auto& s = io.summary(a.output);
  s << "fit " << to_string(fit.method) << " order " << a.order << " on " << x.size() << " points (tau "
    << x.tau() << ")\n";
  s << "  objective: " << std::setprecision(8) << fit.objective;
  if (fit.method == FitMethod::Mce) s << " (T = " << fit.T << ")";
  s << "\n  evaluations: " << fit.iterations << (fit.converged ? ", converged" : ", not converged") << '\n';
  s << "  phi: " << join(fit.model.phi) << '\n';
  s << "  sigma2: " << std::setprecision(6) << fit.model.sigma2 << "  mu: " << fit.model.mu << '\n';
  print_kappa(s, fit.model.phi);
  return kExitOk;
}

struct SimulateArgs {
  std::string model;
  std::string output = "-";
  std::string sampler = "auto";
  int n = 0;
  double tau = 1.0;
  std::uint64_t seed = 1;
};

int cmd_simulate(const SimulateArgs& a, const Streams& io) {
  const auto model = read_model(a.model);
  const bool dense = a.sampler == "grid" || (a.sampler == "auto" && a.n <= kGridSamplerLimit);
  const auto x = dense ? simulate_grid(model, a.n - 1, a.tau, a.seed)
                       : simulate_state_space(model, a.n - 1, a.tau, a.seed);
  write_to(a.output, io.out, [&](std::ostream& os) {
    os << "t,value\n";
    for (std::size_t i = 0; i < x.size(); ++i) os << format_number(x.time(i)) << ',' << format_number(x[i]) << '\n';
  });
  io.summary(a.output) << "simulated " << x.size() << " points of OU(" << model.order() << ") at tau " << a.tau
                       << " with seed " << a.seed << " (" << (dense ? "grid" : "state-space") << " sampler)\n";
  return kExitOk;
}

struct PredictArgs {
  std::string data;
  std::string model;
  std::string output = "-";
  std::string mean = "sample";
  std::optional<double> from;
  std::optional<double> to;
  int points_per_step = 100;
  std::optional<std::size_t> window;
  double tau = 1.0;
};

int cmd_predict(const PredictArgs& a, const Streams& io) {
  const auto x = ingest_csv(a.data, a.tau, MeanPolicy::parse(a.mean));
  const auto model = read_model(a.model);
  const double last = x.time(x.size() - 1);
  const double from = a.from.value_or(std::max(x.t0(), last - 7.0 * x.tau()));
  const double to = a.to.value_or(last + 4.0 * x.tau());
  const auto band = predict_series(model, x, from, to, a.points_per_step, a.window);
  write_to(a.output, io.out, [&](std::ostream& os) {
    os << "t,mean,sd,lo,hi\n";
    for (std::size_t i = 0; i < band.times.size(); ++i) {
      os << format_number(band.times[i]) << ',' << format_number(band.mean[i]) << ',' << format_number(band.sd[i])
         << ',' << format_number(band.lower(i)) << ',' << format_number(band.upper(i)) << '\n';
    }
  });
  io.summary(a.output) << "predicted " << band.times.size() << " points on [" << from << ", " << to << "] from "
                       << a.window.value_or(x.size()) << " observations\n";
  return kExitOk;
}

struct AcfArgs {
  std::string data;
  std::string model;
  std::string output = "-";
  std::string mean = "sample";
  int maxlag = 20;
  double tau = 1.0;
};

int cmd_acf(const AcfArgs& a, const Streams& io) {
  if (a.data.empty() && a.model.empty()) throw InvalidArgument("acf needs --data, --model or both");
  std::optional<TimeSeriesSample> x;
  if (!a.data.empty()) x = ingest_csv(a.data, a.tau, MeanPolicy::parse(a.mean));
  const double tau = x ? x->tau() : a.tau;

  std::vector<double> empirical;
  std::vector<double> fitted;
  if (x) empirical = empirical_autocovariance(*x, a.maxlag);
  if (!a.model.empty()) fitted = CovarianceModel::from_model(read_model(a.model)).gamma_grid(a.maxlag, tau);

  write_to(a.output, io.out, [&](std::ostream& os) {
    os << "lag,empirical,model\n";
    for (int h = 0; h <= a.maxlag; ++h) {
      const auto k = static_cast<std::size_t>(h);
      os << h << ',' << (empirical.empty() ? "" : format_number(empirical[k])) << ','
         << (fitted.empty() ? "" : format_number(fitted[k])) << '\n';
    }
  });
  auto& s = io.summary(a.output);
  s << "autocovariances at lags 0.." << a.maxlag << " (tau " << tau << ")\n";
  if (!empirical.empty()) s << "  empirical gamma(0): " << std::setprecision(6) << empirical[0] << '\n';
  if (!fitted.empty()) s << "  model gamma(0): " << std::setprecision(6) << fitted[0] << '\n';
  return kExitOk;
}

struct CompareArgs {
  double lambda1 = 0.84;
  double lambda2 = 0.84;
  int lags = 10;
  std::string output = "-";
  std::string grid;
  double grid_lo = 0.0;
  double grid_hi = 3.0;
  double grid_step = 0.02;
};

int cmd_compare_ar(const CompareArgs& a, const Streams& io) {
  std::vector<double> ou(static_cast<std::size_t>(a.lags));
  for (int h = 1; h <= a.lags; ++h) ou[static_cast<std::size_t>(h - 1)] = ou2_rho(a.lambda1, a.lambda2, h);
  const auto ar = yule_walker_from_correlations(std::vector<double>{ou[0], ou[1]});
  const auto ar_rho = ar.autocorrelations(a.lags);
  const double gap = lemma_gap(a.lambda1, a.lambda2);

  write_to(a.output, io.out, [&](std::ostream& os) {
    os << "lag,ou2,ar2\n";
    for (int h = 1; h <= a.lags; ++h) {
      const auto k = static_cast<std::size_t>(h - 1);
      os << h << ',' << format_number(ou[k]) << ',' << format_number(ar_rho[k]) << '\n';
    }
  });
  if (!a.grid.empty()) {
    const auto cells = lemma_gap_grid(a.grid_lo, a.grid_hi, a.grid_step);
    write_to(a.grid, io.out, [&](std::ostream& os) {
      os << "lambda1,lambda2,gap\n";
      for (const auto& c : cells) {
        os << format_number(c.lambda1) << ',' << format_number(c.lambda2) << ',' << format_number(c.gap) << '\n';
      }
    });
  }
  auto& s = io.summary(a.output);
  s << "OU(2) with rates " << a.lambda1 << ", " << a.lambda2 << " vs the AR(2) matching rho1, rho2 (tau 1)\n";
  s << "  AR(2) coefficients: " << join(ar.coeffs) << '\n';
  s << "  r3 - rho3: " << std::setprecision(10) << gap << '\n';
  return kExitOk;
}

struct ConvertArgs {
  std::string kappa;
  std::string phi;
  double sigma2 = 1.0;
  double mu = 0.0;
  std::string output = "-";
};

int cmd_convert(const ConvertArgs& a, const Streams& io) {
  auto& s = io.summary(a.output);
  if (!a.kappa.empty()) {
    const KappaVector kappa(parse_complex_list(a.kappa));
    const OuModel model{phi_from_kappa(kappa), a.sigma2, a.mu};
    model.validate();
    write_to(a.output, io.out, [&](std::ostream& os) { os << model_to_json(model).dump(2) << '\n'; });
    s << "phi: " << join(model.phi) << '\n';
    return kExitOk;
  }
  const auto phi = parse_number_list(a.phi);
  const auto kappa = kappa_from_phi(phi);
  write_to(a.output, io.out, [&](std::ostream& os) {
    os << "re,im\n";
    for (const auto& k : kappa.entries()) os << format_number(k.real()) << ',' << format_number(k.imag()) << '\n';
  });
  s << "kappa:";
  for (const auto& k : kappa.entries()) s << ' ' << format_complex(k);
  s << '\n';
  return kExitOk;
}

std::string single_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ornstein-Uhlenbeck processes of order p: fitting, simulation and prediction", "oup"};
  app.require_subcommand(1);
  app.footer("Environment: OUP_THREADS sets the default worker count for multi-start fits.\n"
             "Exit codes: 0 success, 1 domain error, 2 usage error.");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit an OU(p) model to a CSV series and write model JSON");
  fit_cmd->add_option("--data", fit.data, "Input CSV (value or t,value)")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--order", fit.order, "Model order p")->required()->check(CLI::Range(1, 20));
  fit_cmd->add_option("--method", fit.method, "Estimator")
      ->check(CLI::IsMember({"mce", "mle-diff", "mle-centered"}))
      ->capture_default_str();
  fit_cmd->add_option("--T", fit.T, "Correlation horizon for mce; 0 uses floor(0.9 (N - 1))")
      ->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--starts", fit.starts, "Random starts (default 20 for mce, 10 for mle)")
      ->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--seed", fit.seed, "Seed for the random starts");
  fit_cmd->add_option("--threads", fit.threads, "Worker threads; 0 uses OUP_THREADS or all cores")
      ->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--mean", fit.mean, "Mean handling: sample, zero or a number")->capture_default_str();
  fit_cmd->add_option("--tau", fit.tau, "Spacing for one-column input")->check(CLI::PositiveNumber)->capture_default_str();
  fit_cmd->add_option("--init", fit.init, "Starting model JSON for mle (default: the mce fit)")
      ->check(CLI::ExistingFile);
  fit_cmd->add_option("--output,-o", fit.output, "Model JSON path, - for stdout")->capture_default_str();
  fit_cmd->add_option("--report", fit.report, "Fit report JSON path (objective, evaluations, kappa)");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Draw an exact sample path; CSV t,value");
  sim_cmd->add_option("--model", sim.model, "Model JSON")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--n", sim.n, "Number of points")->required()->check(CLI::Range(2, 100000000));
  sim_cmd->add_option("--tau", sim.tau, "Spacing")->check(CLI::PositiveNumber)->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  sim_cmd->add_option("--sampler", sim.sampler, "auto uses the dense sampler up to 5000 points")
      ->check(CLI::IsMember({"auto", "grid", "state-space"}))
      ->capture_default_str();
  sim_cmd->add_option("--output,-o", sim.output, "CSV path, - for stdout")->capture_default_str();

  PredictArgs pred;
  auto* pred_cmd = app.add_subcommand("predict", "Best linear prediction with 2 sd bands; CSV t,mean,sd,lo,hi");
  pred_cmd->add_option("--data", pred.data, "Observed CSV")->required()->check(CLI::ExistingFile);
  pred_cmd->add_option("--model", pred.model, "Model JSON")->required()->check(CLI::ExistingFile);
  pred_cmd->add_option("--from", pred.from, "First target time (default: 7 steps before the last observation)");
  pred_cmd->add_option("--to", pred.to, "Last target time (default: 4 steps after the last observation)");
  pred_cmd->add_option("--points-per-step", pred.points_per_step, "Grid points per observation spacing")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  pred_cmd->add_option("--window", pred.window, "Condition on the last w observations only")
      ->check(CLI::PositiveNumber);
  pred_cmd->add_option("--mean", pred.mean, "Mean policy of the observed series")->capture_default_str();
  pred_cmd->add_option("--tau", pred.tau, "Spacing for one-column input")->check(CLI::PositiveNumber)->capture_default_str();
  pred_cmd->add_option("--output,-o", pred.output, "CSV path, - for stdout")->capture_default_str();

  AcfArgs acf;
  auto* acf_cmd = app.add_subcommand("acf", "Empirical and model autocovariances; CSV lag,empirical,model");
  acf_cmd->add_option("--data", acf.data, "Observed CSV")->check(CLI::ExistingFile);
  acf_cmd->add_option("--model", acf.model, "Model JSON")->check(CLI::ExistingFile);
  acf_cmd->add_option("--maxlag", acf.maxlag, "Largest lag")->check(CLI::NonNegativeNumber)->capture_default_str();
  acf_cmd->add_option("--mean", acf.mean, "Mean policy of the observed series")->capture_default_str();
  acf_cmd->add_option("--tau", acf.tau, "Spacing for one-column input or model-only output")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  acf_cmd->add_option("--output,-o", acf.output, "CSV path, - for stdout")->capture_default_str();

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare-ar", "OU(2) against the AR(2) sharing its first two correlations");
  cmp_cmd->add_option("--lambda1", cmp.lambda1, "First OU(2) rate")->check(CLI::PositiveNumber)->capture_default_str();
  cmp_cmd->add_option("--lambda2", cmp.lambda2, "Second OU(2) rate")->check(CLI::PositiveNumber)->capture_default_str();
  cmp_cmd->add_option("--lags", cmp.lags, "Correlations listed")->check(CLI::Range(2, 10000))->capture_default_str();
  cmp_cmd->add_option("--output,-o", cmp.output, "Correlation table CSV lag,ou2,ar2")->capture_default_str();
  cmp_cmd->add_option("--grid", cmp.grid, "Also write CSV lambda1,lambda2,gap over (lo, hi]^2");
  cmp_cmd->add_option("--grid-lo", cmp.grid_lo, "Grid lower bound (exclusive)")->capture_default_str();
  cmp_cmd->add_option("--grid-hi", cmp.grid_hi, "Grid upper bound")->capture_default_str();
  cmp_cmd->add_option("--grid-step", cmp.grid_step, "Grid step")->check(CLI::PositiveNumber)->capture_default_str();

  ConvertArgs conv;
  auto* conv_cmd = app.add_subcommand("convert", "Map rates to model JSON or phi to rates (CSV re,im)");
  auto* kappa_opt = conv_cmd->add_option("--kappa", conv.kappa, "Rates, e.g. \"0.9,0.2+0.4i,0.2-0.4i\"");
  auto* phi_opt = conv_cmd->add_option("--phi", conv.phi, "Coefficients, e.g. \"-1.3,-0.56,-0.18\"");
  kappa_opt->excludes(phi_opt);
  conv_cmd->add_option("--sigma2", conv.sigma2, "Noise variance for --kappa")->capture_default_str();
  conv_cmd->add_option("--mu", conv.mu, "Process mean for --kappa")->capture_default_str();
  conv_cmd->add_option("--output,-o", conv.output, "Output path, - for stdout")->capture_default_str();
  conv_cmd->callback([&] {
    if (kappa_opt->count() + phi_opt->count() != 1) throw CLI::ValidationError("convert needs --kappa or --phi");
  });

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "E_USAGE: " << single_line(e.what()) << '\n';
    return kExitUsage;
  }

  const Streams io{out, err};
  try {
    if (*fit_cmd) return cmd_fit(fit, io);
    if (*sim_cmd) return cmd_simulate(sim, io);
    if (*pred_cmd) return cmd_predict(pred, io);
    if (*acf_cmd) return cmd_acf(acf, io);
    if (*cmp_cmd) return cmd_compare_ar(cmp, io);
    if (*conv_cmd) return cmd_convert(conv, io);
  } catch (const Error& e) {
    err << e.code() << ": " << single_line(e.what()) << '\n';
    return kExitDomainError;
  } catch (const nlohmann::json::exception& e) {
    err << "E_PARSE: " << single_line(e.what()) << '\n';
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace oup::cli
