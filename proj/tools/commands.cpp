#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include <CLI11.hpp>

#include "json_writer.hpp"
#include "mbsp/error.hpp"
#include "mbsp/io.hpp"
#include "mbsp/parallel.hpp"

namespace mbsp::cli {
namespace fs = std::filesystem;
namespace {

nlohmann::json matrix_rows(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

fs::path prepare_out(const RunConfig& config) {
  const fs::path out = config.out.empty() ? fs::path(".") : fs::path(config.out);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw InputError("cannot create output directory " + out.string() + ": " + ec.message());
  return out;
}

void write_effective_config(const fs::path& path, RunConfig config, const std::string& command) {
  config.command = command;
  write_json(path, to_json(config));
}

std::string chain_file_name(io::ChainFormat format, const char* stem) {
  return std::string(stem) + (format == io::ChainFormat::binary ? ".bin" : ".csv");
}

nlohmann::json averaged_to_json(const AveragedMetrics& a) {
  return {{"mse_est", a.mse_est}, {"mse_pred", a.mse_pred}, {"fdr", a.fdr}, {"fnr", a.fnr},
          {"mp", a.mp},           {"mp_row", a.mp_row},     {"fp", a.fp},   {"tp", a.tp},
          {"fn", a.fn},           {"tn", a.tn}};
}

}  // namespace

Dataset load_dataset(const RunConfig& config) {
  if (config.x_csv.empty() || config.y_csv.empty()) throw InputError("X and Y CSV paths are required");
  Matrix x = io::read_csv_matrix(config.x_csv);
  Matrix y = io::read_csv_matrix(config.y_csv);
  if (x.rows() != y.rows())
    throw InputError("row-count mismatch: " + config.x_csv + " has " + std::to_string(x.rows()) +
                     " data rows, " + config.y_csv + " has " + std::to_string(y.rows()));
  Dataset data(std::move(x), std::move(y));
  return config.center ? data.centered() : data;
}

nlohmann::json summary_to_json(const PosteriorSummary& summary, const nlohmann::json& hyper) {
  nlohmann::json active = nlohmann::json::array();
  for (const bool a : summary.active_rows) active.push_back(a);
  return {
      {"level", summary.level},
      {"median", matrix_rows(summary.median)},
      {"ci_lower", matrix_rows(summary.ci_lower)},
      {"ci_upper", matrix_rows(summary.ci_upper)},
      {"active_rows", active},
      {"active_count", summary.active_count()},
      {"hyperparameters", hyper},
  };
}

PosteriorSummary cmd_fit(const RunConfig& config, std::ostream& log) {
  const auto format = io::parse_chain_format(config.chain_format);
  const Dataset data = load_dataset(config);
  const Hyperparameters resolved = config.hyper.resolve(data);
  const fs::path out = prepare_out(config);

  const ChainOutput chain = run_chain(data, resolved, ChainOptions{0, config.store_sigma});
  const PosteriorSummary summary = summarize_chain(chain, config.level);

  RunConfig effective = config;
  effective.hyper = resolved;
  io::write_chain(out / chain_file_name(format, "chain"), chain, format);
  if (config.store_sigma)
    io::write_chain(out / chain_file_name(format, "sigma_chain"), chain.sigma_draws,
                    static_cast<std::uint64_t>(chain.q), static_cast<std::uint64_t>(chain.q),
                    chain.draw_count, format);
  write_json(out / "summary.json", summary_to_json(summary, hyper_to_json(resolved)));
  write_effective_config(out / "config.json", effective, "fit");

  log << "fit: n=" << data.n() << " p=" << data.p() << " q=" << data.q()
      << " draws=" << chain.draw_count << " active rows=" << summary.active_count() << "/"
      << data.p() << " tau=" << io::format_double(resolved.tau_value())
      << " k=" << io::format_double(resolved.k_value()) << " (" << std::fixed
      << std::setprecision(0) << chain.iterations_per_minute << " iterations/minute)\n"
      << std::defaultfloat;
  if (chain.clamped_chi > 0)
    log << "fit: clamped " << chain.clamped_chi << " degenerate local-scale conditionals\n";
  return summary;
}

ExperimentResult cmd_experiment(const RunConfig& config, std::ostream& log) {
  ExperimentConfig exp = experiment_preset(config.experiment_id);
  exp.replications = config.replications;
  exp.seed = config.hyper.seed;
  exp.level = config.level;
  exp.hyper = config.hyper;
  const fs::path out = prepare_out(config);

  const ExperimentResult result = run_experiment(exp, worker_limit());

  std::ofstream csv(out / "replications.csv", std::ios::binary | std::ios::trunc);
  if (!csv) throw InputError("cannot write " + (out / "replications.csv").string());
  csv << "replication,mse_est,mse_pred,fdr,fnr,mp,fp,tp,fn,tn,wall_time_s,mp_row\n";
  for (std::size_t r = 0; r < result.replications.size(); ++r) {
    const auto& rep = result.replications[r];
    const auto& m = rep.metrics;
    csv << r + 1 << ',' << io::format_double(m.mse_est) << ',' << io::format_double(m.mse_pred)
        << ',' << io::format_double(m.fdr) << ',' << io::format_double(m.fnr) << ','
        << io::format_double(m.mp) << ',' << m.fp << ',' << m.tp << ',' << m.fn << ',' << m.tn
        << ',' << io::format_double(rep.wall_time_s) << ',' << io::format_double(m.mp_row) << '\n';
  }
  csv.close();

  const nlohmann::json report = {
      {"experiment",
       {{"id", exp.id},
        {"n", exp.n},
        {"p", exp.p},
        {"q", exp.q},
        {"n_active", exp.n_active},
        {"sigma2", exp.sigma2},
        {"replications", exp.replications},
        {"seed", exp.seed},
        {"level", exp.level}}},
      {"average", averaged_to_json(result.average)},
  };
  write_json(out / "report.json", report);
  write_effective_config(out / "config.json", config, "experiment");

  const auto& a = result.average;
  log << "experiment " << exp.id << " (n=" << exp.n << ", p=" << exp.p << ", q=" << exp.q
      << ", " << exp.n_active << " active), " << exp.replications << " replications\n"
      << "  MSE_est=" << a.mse_est << " MSE_pred=" << a.mse_pred << " FDR=" << a.fdr
      << " FNR=" << a.fnr << " MP=" << a.mp << '\n';
  return result;
}

CrossValidationResult cmd_cv(const RunConfig& config, std::ostream& log) {
  const Dataset data = load_dataset(config);
  const fs::path out = prepare_out(config);
  const CrossValidationResult cv = cross_validate(data, config.folds, config.hyper, worker_limit());

  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& fold : cv.folds) sizes.push_back(fold.size());
  write_json(out / "cv.json", {{"folds", config.folds},
                               {"mspe", cv.mspe},
                               {"fold_mspe", cv.fold_mspe},
                               {"fold_sizes", sizes}});
  write_effective_config(out / "config.json", config, "cv");

  log << "cv: " << config.folds << "-fold MSPE (x100) = " << io::format_double(cv.mspe) << '\n';
  for (std::size_t f = 0; f < cv.fold_mspe.size(); ++f)
    log << "  fold " << f + 1 << " (" << cv.folds[f].size()
        << " rows): " << io::format_double(cv.fold_mspe[f]) << '\n';
  return cv;
}

PosteriorSummary cmd_summarize(const RunConfig& config, std::ostream& log) {
  if (config.chain.empty()) throw InputError("a chain file is required");
  const fs::path chain_path(config.chain);
  const io::StoredChain chain = io::read_chain(chain_path);
  const fs::path out = prepare_out(config);

  const PosteriorSummary summary =
      summarize_draws(chain.draws, static_cast<Eigen::Index>(chain.p),
                      static_cast<Eigen::Index>(chain.q), chain.draw_count, config.level);

  // Hyperparameters come from the fit's effective config beside the chain.
  nlohmann::json hyper = nullptr;
  const fs::path fit_config = chain_path.parent_path() / "config.json";
  if (fs::exists(fit_config)) hyper = hyper_to_json(load_run_config(fit_config).hyper);

  write_json(out / "summary.json", summary_to_json(summary, hyper));
  io::write_history_csv(out / "history.csv", chain);
  write_effective_config(out / "summarize_config.json", config, "summarize");

  log << "summarize: " << chain.draw_count << " draws, level " << config.level << ", active rows "
      << summary.active_count() << "/" << chain.p << '\n';
  return summary;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse Bayesian multivariate regression with TPBN shrinkage priors", "mbsp"};
  app.require_subcommand(1);

  // Raw flag values; only options the user actually passed override the
  // config file or the built-in defaults.
  RunConfig flags;
  double tau = 0.0, k = 0.0;
  std::string config_path;
  bool no_center = false;

  struct Bound {
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters;
  } bound;
  auto bind = [&](CLI::Option* opt, std::function<void(RunConfig&)> apply) {
    bound.setters.emplace_back(opt, std::move(apply));
  };

  auto add_chain_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Load settings from a config.json")->check(CLI::ExistingFile);
    bind(sub->add_option("--seed", flags.hyper.seed, "RNG seed"),
         [&](RunConfig& c) { c.hyper.seed = flags.hyper.seed; });
    bind(sub->add_option("--iterations", flags.hyper.iterations, "Total Gibbs iterations"),
         [&](RunConfig& c) { c.hyper.iterations = flags.hyper.iterations; });
    bind(sub->add_option("--burn-in", flags.hyper.burn_in, "Iterations discarded as burn-in"),
         [&](RunConfig& c) { c.hyper.burn_in = flags.hyper.burn_in; });
    bind(sub->add_option("--thin", flags.hyper.thin, "Keep every thin-th draw"),
         [&](RunConfig& c) { c.hyper.thin = flags.hyper.thin; });
    bind(sub->add_option("--tau", tau, "Global shrinkage (default 1/(p sqrt(n ln n)))"),
         [&](RunConfig& c) { c.hyper.tau = tau; });
    bind(sub->add_option("--u", flags.hyper.u, "TPBN u (0.5 = horseshoe)"),
         [&](RunConfig& c) { c.hyper.u = flags.hyper.u; });
    bind(sub->add_option("--a", flags.hyper.a, "TPBN a (0.5 = horseshoe)"),
         [&](RunConfig& c) { c.hyper.a = flags.hyper.a; });
    bind(sub->add_option("--d", flags.hyper.d, "Inverse-Wishart shape"),
         [&](RunConfig& c) { c.hyper.d = flags.hyper.d; });
    bind(sub->add_option("--k", k, "Inverse-Wishart scale (default: residual variance)"),
         [&](RunConfig& c) { c.hyper.k = k; });
    bind(sub->add_option("--level", flags.level, "Credible level"),
         [&](RunConfig& c) { c.level = flags.level; });
    bind(sub->add_option("--out", flags.out, "Output directory"),
         [&](RunConfig& c) { c.out = flags.out; });
  };
  auto add_data_flags = [&](CLI::App* sub) {
    bind(sub->add_option("x_csv", flags.x_csv, "Design matrix CSV"),
         [&](RunConfig& c) { c.x_csv = flags.x_csv; });
    bind(sub->add_option("y_csv", flags.y_csv, "Response matrix CSV"),
         [&](RunConfig& c) { c.y_csv = flags.y_csv; });
    bind(sub->add_flag("--no-center", no_center, "Do not mean-center X and Y"),
         [&](RunConfig& c) { c.center = !no_center; });
  };

  CLI::App* fit = app.add_subcommand("fit", "Fit the model to X/Y CSV files");
  add_data_flags(fit);
  add_chain_flags(fit);
  bind(fit->add_option("--chain-format", flags.chain_format, "binary or csv"),
       [&](RunConfig& c) { c.chain_format = flags.chain_format; });
  bind(fit->add_flag("--store-sigma", flags.store_sigma, "Also store Sigma draws"),
       [&](RunConfig& c) { c.store_sigma = flags.store_sigma; });

  CLI::App* experiment = app.add_subcommand("experiment", "Run a preset simulation experiment");
  add_chain_flags(experiment);
  bind(experiment->add_option("--id", flags.experiment_id, "Preset 1..6")->check(CLI::Range(1, 6)),
       [&](RunConfig& c) { c.experiment_id = flags.experiment_id; });
  bind(experiment->add_option("--replications", flags.replications, "Number of replications"),
       [&](RunConfig& c) { c.replications = flags.replications; });

  CLI::App* cv = app.add_subcommand("cv", "K-fold cross-validated prediction error");
  add_data_flags(cv);
  add_chain_flags(cv);
  bind(cv->add_option("--folds", flags.folds, "Number of folds"),
       [&](RunConfig& c) { c.folds = flags.folds; });

  CLI::App* summarize = app.add_subcommand("summarize", "Re-summarize a stored chain");
  bind(summarize->add_option("chain", flags.chain, "Chain file (binary or CSV)")->required(),
       [&](RunConfig& c) { c.chain = flags.chain; });
  bind(summarize->add_option("--level", flags.level, "Credible level"),
       [&](RunConfig& c) { c.level = flags.level; });
  bind(summarize->add_option("--out", flags.out, "Output directory")->required(),
       [&](RunConfig& c) { c.out = flags.out; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    for (const auto& [opt, apply] : bound.setters)
      if (opt->count() > 0) apply(config);

    if (fit->parsed()) {
      config.command = "fit";
      cmd_fit(config, out);
    } else if (experiment->parsed()) {
      config.command = "experiment";
      cmd_experiment(config, out);
    } else if (cv->parsed()) {
      config.command = "cv";
      cmd_cv(config, out);
    } else {
      config.command = "summarize";
      cmd_summarize(config, out);
    }
  } catch (const NumericError& e) {
    err << "mbsp: numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    err << "mbsp: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "mbsp: internal error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}

}  // namespace mbsp::cli
