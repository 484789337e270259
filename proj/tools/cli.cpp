#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "csuq/error.hpp"
#include "csuq/image_io.hpp"
#include "csuq/metrics.hpp"
#include "csuq/parallel.hpp"
#include "csuq/random.hpp"

namespace csuq::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string to_string(Command command) {
  switch (command) {
    case Command::kReconstruct: return "reconstruct";
    case Command::kTrials: return "trials";
    case Command::kTable: return "table";
    case Command::kDiagnostics: return "diagnostics";
    case Command::kPhantom: return "phantom";
  }
  return "unknown";
}

void RunManifest::validate() const {
  config.validate();
  if (command != Command::kPhantom && !input_path && phantom_s0.empty()) {
    throw DomainError("an input image (--input) or phantom parameters (--phantom s0=<int>) are required");
  }
  if (command == Command::kTable && input_path && thresholds.empty()) {
    throw DomainError("table needs at least one threshold");
  }
  if (command == Command::kPhantom && phantom_s0.empty()) throw DomainError("phantom needs --phantom s0=<int>");
  if (output_dir.empty()) throw IoError("output directory must not be empty");
}

std::pair<std::size_t, std::size_t> image_shape_for(std::size_t p) {
  if (p == 0) throw DimensionError("p must be positive");
  std::size_t rows = 1;
  for (std::size_t d = 1; d * d <= p; ++d) {
    if (p % d == 0) rows = d;
  }
  return {rows, p / rows};
}

GroundTruth load_ground_truth(const RunManifest& manifest, const ExperimentConfig& config,
                              std::optional<std::size_t> phantom_s0) {
  if (manifest.input_path) {
    const Image image = load_image(*manifest.input_path);
    if (manifest.p != 0 && manifest.p != image.size()) {
      throw DimensionError(fmt::format("--p {} does not match the {}x{} input image", manifest.p, image.rows, image.cols));
    }
    return sparsify_threshold(image, config.threshold);
  }
  PhantomSpec spec = manifest.phantom;
  const auto [rows, cols] = image_shape_for(manifest.p != 0 ? manifest.p : spec.rows * spec.cols);
  spec.rows = rows;
  spec.cols = cols;
  spec.s0 = phantom_s0.value_or(manifest.phantom_s0.empty() ? spec.s0 : manifest.phantom_s0.front());
  return make_phantom(spec);
}

namespace {

ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson summary_to_json(const MetricSummary& s) {
  return ojson{{"mean", number_or_null(s.mean)}, {"stddev", number_or_null(s.stddev)}};
}

ojson aggregate_to_json(const ExperimentAggregate& agg) {
  ojson j;
  j["h"] = summary_to_json(agg.h);
  j["h_S0"] = summary_to_json(agg.h_S0);
  j["ssim"] = summary_to_json(agg.ssim);
  j["r_linf"] = summary_to_json(agg.r_linf);
  j["relative_noise"] = summary_to_json(agg.relative_noise);
  j["lambda_used"] = summary_to_json(agg.lambda_used);
  j["sigma_hat"] = summary_to_json(agg.sigma_hat);
  j["successful"] = agg.successful;
  j["failed"] = agg.failed;
  j["unconverged"] = agg.unconverged;
  return j;
}

ojson trial_to_json(const TrialMetrics& t) {
  ojson j;
  j["h"] = t.h;
  j["h_S0"] = t.h_S0;
  j["ssim"] = number_or_null(t.ssim);
  j["r_linf"] = t.r_linf;
  j["relative_noise"] = t.relative_noise;
  j["lambda_used"] = t.lambda_used;
  j["sigma_hat"] = t.sigma_hat;
  j["radius"] = t.radius;
  j["iterations"] = t.iterations;
  j["converged"] = t.converged;
  j["failed"] = t.failed;
  if (t.failed) j["error"] = t.error;
  return j;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

fs::path out_path(const RunManifest& manifest, const std::string& name) { return manifest.output_dir / name; }

void ensure_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

StudyConfig study_from(const ExperimentConfig& config, const GroundTruth& truth) {
  StudyConfig study;
  study.truth = truth;
  study.n = config.measurements(truth.p());
  study.sigma = config.sigma;
  study.lambda_multiple = config.lambda_multiple.value_or(25.0);
  study.K = config.K;
  study.lambda_scale = config.lambda_scale;
  study.mode = config.sampling_mode;
  study.master_seed = config.master_seed;
  study.solver = config.solver;
  study.threads = config.threads;
  return study;
}

class FileSet {
 public:
  explicit FileSet(const RunManifest& manifest) : manifest_(manifest) {}

  void add(const std::string& name, std::string contents) { files_.emplace_back(name, std::move(contents)); }

  // Single writer: everything is rendered in memory first, then committed.
  std::vector<fs::path> commit() {
    ensure_output_dir(manifest_.output_dir);
    std::vector<fs::path> written;
    for (auto& [name, contents] : files_) {
      const fs::path path = out_path(manifest_, name);
      write_file_atomic(path, contents);
      written.push_back(path);
    }
    return written;
  }

 private:
  const RunManifest& manifest_;
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace

ojson config_to_json(const ExperimentConfig& config) {
  ojson j;
  j["n_fraction"] = config.n_fraction;
  j["sigma"] = config.sigma;
  j["sigma_known"] = config.sigma_known;
  j["alpha"] = config.alpha;
  j["threshold"] = config.threshold;
  j["lambda_multiple"] = config.lambda_multiple ? ojson(*config.lambda_multiple) : ojson(nullptr);
  j["lambda_scale"] = to_string(config.lambda_scale);
  j["K"] = config.K;
  j["cv_multiples"] = config.cv_multiples;
  j["cv_folds"] = config.cv_folds;
  j["trials"] = config.trials;
  j["seed"] = config.master_seed;
  j["sampling"] = to_string(config.sampling_mode);
  j["solver"] = {{"max_iters", config.solver.max_iters},
                 {"tol_kkt", config.solver.tol_kkt},
                 {"tol_obj", config.solver.tol_obj},
                 {"restart", config.solver.restart}};
  return j;
}

ojson manifest_to_json(const RunManifest& manifest) {
  ojson j;
  j["command"] = to_string(manifest.command);
  j["config"] = config_to_json(manifest.config);
  j["input"] = manifest.input_path ? ojson(manifest.input_path->string()) : ojson(nullptr);
  if (!manifest.input_path) {
    j["phantom"] = {{"s0", manifest.phantom_s0},
                    {"min_magnitude", manifest.phantom.min_magnitude},
                    {"max_magnitude", manifest.phantom.max_magnitude},
                    {"complex_phase", manifest.phantom.complex_phase},
                    {"seed", manifest.phantom.seed}};
  }
  j["p"] = manifest.p;
  j["thresholds"] = manifest.thresholds;
  j["plots"] = manifest.emit_plots;
  return j;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

std::string signal_csv(const ComplexSignal& v) {
  std::string out = "index,re,im\n";
  for (Eigen::Index i = 0; i < v.size(); ++i) out += fmt::format("{},{:.17g},{:.17g}\n", i, v[i].real(), v[i].imag());
  return out;
}

std::string render_intervals_svg(const ConfidenceRegions& regions, const ComplexSignal* beta0, std::size_t k) {
  const std::size_t p = regions.size();
  if (k > p) throw DomainError(fmt::format("cannot plot {} intervals for p = {}", k, p));
  if (beta0 && static_cast<std::size_t>(beta0->size()) != p) throw DimensionError("ground truth length mismatch");

  const ComplexSignal& ranking = beta0 ? *beta0 : regions.center;
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(ranking[static_cast<Eigen::Index>(a)]) > std::abs(ranking[static_cast<Eigen::Index>(b)]);
  });
  order.resize(k);

  constexpr double width = 800, height = 400, left = 60, right = 20, top = 20, bottom = 40;
  double lo = 0.0, hi = 1.0;
  if (k > 0) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (std::size_t idx : order) {
      const double c = regions.center[static_cast<Eigen::Index>(idx)].real();
      lo = std::min(lo, c - regions.radius);
      hi = std::max(hi, c + regions.radius);
      if (beta0) {
        lo = std::min(lo, (*beta0)[static_cast<Eigen::Index>(idx)].real());
        hi = std::max(hi, (*beta0)[static_cast<Eigen::Index>(idx)].real());
      }
    }
    if (hi - lo <= 0.0) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto ypos = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };
  auto xpos = [&](std::size_t rank) { return left + (static_cast<double>(rank) + 0.5) * plot_w / static_cast<double>(std::max<std::size_t>(k, 1)); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n"
      "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n"
      "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n",
      width, height, width, height, width, height, left, top, left, top + plot_h, left, top + plot_h, left + plot_w,
      top + plot_h);
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" text-anchor=\"middle\">coordinates by decreasing magnitude</text>\n",
                     left + plot_w / 2, height - 10);
  svg += fmt::format("<text x=\"5\" y=\"{:.2f}\" font-size=\"11\">{:.4g}</text>\n", top + 10, hi);
  svg += fmt::format("<text x=\"5\" y=\"{:.2f}\" font-size=\"11\">{:.4g}</text>\n", top + plot_h, lo);
  for (std::size_t rank = 0; rank < k; ++rank) {
    const auto idx = static_cast<Eigen::Index>(order[rank]);
    const double x = xpos(rank);
    const double c = regions.center[idx].real();
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"steelblue\"/>\n", x,
                       ypos(c + regions.radius), ypos(c - regions.radius));
    svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2\" fill=\"steelblue\"/>\n", x, ypos(c));
    if (beta0) {
      const double t = ypos((*beta0)[idx].real());
      svg += fmt::format("<path d=\"M{:.2f} {:.2f} L{:.2f} {:.2f} M{:.2f} {:.2f} L{:.2f} {:.2f}\" stroke=\"crimson\"/>\n",
                         x - 3, t - 3, x + 3, t + 3, x - 3, t + 3, x + 3, t - 3);
    }
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_magnitude_svg(const ComplexSignal& v, std::size_t rows, std::size_t cols) {
  const Image img = magnitude_image(v, rows, cols);
  const double peak = img.pixels.empty() ? 0.0 : *std::max_element(img.pixels.begin(), img.pixels.end());
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "shape-rendering=\"crispEdges\">\n<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"black\"/>\n",
      cols, rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const int level = peak > 0.0 ? static_cast<int>(std::lround(255.0 * img(r, c) / peak)) : 0;
      if (level == 0) continue;
      svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"1\" height=\"1\" fill=\"rgb({},{},{})\"/>\n", c, r, level, level,
                         level);
    }
  }
  svg += "</svg>\n";
  return svg;
}

fs::path cmd_plot_intervals(const RunManifest& manifest, const ExperimentResult& result, const GroundTruth* truth,
                            std::size_t k) {
  const std::string svg = render_intervals_svg(result.regions, truth ? &truth->beta0 : nullptr, k);
  ensure_output_dir(manifest.output_dir);
  const fs::path path = out_path(manifest, "intervals.svg");
  write_file_atomic(path, svg);
  return path;
}

std::vector<fs::path> cmd_reconstruct(const RunManifest& manifest) {
  manifest.validate();
  ExperimentConfig config = manifest.config;
  config.trials = 1;
  const GroundTruth truth = load_ground_truth(manifest, config);
  const ExperimentResult result = run_experiment(config, truth);
  const TrialMetrics& trial = result.per_trial.front();
  if (trial.failed) throw Error("reconstruction failed: " + trial.error);

  FileSet files(manifest);
  files.add("beta_hat.csv", signal_csv(result.beta_hat));
  files.add("beta_u.csv", signal_csv(result.reconstruction));
  std::ostringstream regions;
  write_regions_csv(regions, result.regions);
  files.add("regions.csv", regions.str());

  ojson metrics;
  metrics["manifest"] = manifest_to_json(manifest);
  metrics["p"] = result.p;
  metrics["n"] = result.n;
  metrics["s0"] = result.s0;
  metrics["metrics"] = trial_to_json(trial);
  files.add("metrics.json", dump(metrics));
  if (manifest.emit_plots) {
    files.add("reconstruction.svg", render_magnitude_svg(result.beta_hat, truth.rows, truth.cols));
    files.add("intervals.svg",
              render_intervals_svg(result.regions, &truth.beta0, std::min(manifest.plot_k, truth.p())));
  }
  return files.commit();
}

std::vector<fs::path> cmd_trials(const RunManifest& manifest) {
  manifest.validate();
  const GroundTruth truth = load_ground_truth(manifest, manifest.config);
  const ExperimentResult result = run_experiment(manifest.config, truth);

  std::string csv = "trial,h,h_S0,ssim,r_linf,relative_noise,lambda,sigma_hat,radius,iterations,converged,failed\n";
  for (std::size_t t = 0; t < result.per_trial.size(); ++t) {
    const auto& m = result.per_trial[t];
    csv += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{},{}\n", t, m.h, m.h_S0,
                       m.ssim, m.r_linf, m.relative_noise, m.lambda_used, m.sigma_hat, m.radius, m.iterations,
                       m.converged ? 1 : 0, m.failed ? 1 : 0);
  }
  ojson summary;
  summary["manifest"] = manifest_to_json(manifest);
  summary["p"] = result.p;
  summary["n"] = result.n;
  summary["s0"] = result.s0;
  summary["valid"] = result.valid;
  summary["aggregate"] = aggregate_to_json(result.aggregate);

  FileSet files(manifest);
  files.add("trials.csv", csv);
  files.add("summary.json", dump(summary));
  if (manifest.emit_plots && result.regions.center.size() > 0) {
    files.add("intervals.svg", render_intervals_svg(result.regions, &truth.beta0, std::min(manifest.plot_k, truth.p())));
    files.add("reconstruction.svg", render_magnitude_svg(result.beta_hat, truth.rows, truth.cols));
  }
  return files.commit();
}

std::vector<fs::path> cmd_table(const RunManifest& manifest) {
  manifest.validate();
  std::vector<ExperimentConfig> configs;
  if (manifest.input_path) {
    for (double threshold : manifest.thresholds) {
      ExperimentConfig c = manifest.config;
      c.threshold = threshold;
      configs.push_back(c);
    }
  } else {
    for (std::size_t i = 0; i < manifest.phantom_s0.size(); ++i) {
      ExperimentConfig c = manifest.config;
      c.threshold = 0.0;
      configs.push_back(c);
    }
  }
  const auto rows = run_table(configs, [&](const ExperimentConfig& config, std::size_t row) {
    if (manifest.input_path) return load_ground_truth(manifest, config);
    return load_ground_truth(manifest, config, manifest.phantom_s0[row]);
  });

  std::ostringstream csv;
  write_table_csv(csv, rows);
  ojson echo = manifest_to_json(manifest);
  echo["valid_rows"] = ojson::array();
  for (const auto& row : rows) echo["valid_rows"].push_back(row.valid);

  FileSet files(manifest);
  files.add("table.csv", csv.str());
  files.add("table.manifest.json", dump(echo));
  return files.commit();
}

std::vector<fs::path> cmd_diagnostics(const RunManifest& manifest) {
  manifest.validate();
  const ExperimentConfig& config = manifest.config;
  const GroundTruth truth = load_ground_truth(manifest, config);
  const std::size_t p = truth.p();
  const std::size_t n = config.measurements(p);
  const StudyConfig study = study_from(config, truth);
  const auto& opts = manifest.diagnostics;

  ojson report;
  report["manifest"] = manifest_to_json(manifest);
  report["p"] = p;
  report["n"] = n;
  report["s0"] = truth.s0();

  // One realization: decomposition and oracle ratios.
  const SimulatedMeasurement sim =
      simulate_measurement(truth, n, config.sigma, config.sampling_mode, derive_seed(config.master_seed, 0));
  const double lambda =
      lambda_from_multiple(study.lambda_multiple, lambda0(config.sigma, config.K, n, p), n, config.lambda_scale);
  const LassoSolution sol = solve_classo(sim.op, sim.y, lambda, config.solver);
  const DebiasedEstimate est = debias(sim.op, sim.y, sol.beta_hat);
  const DecompositionReport dec = decompose(sim.op, sim.y, sol.beta_hat, est.beta_u, truth.beta0, sim.noise);
  report["decomposition"] = {{"lambda", lambda},
                             {"converged", sol.converged},
                             {"kkt_residual", sol.kkt_residual},
                             {"w_linf", dec.W.cwiseAbs().maxCoeff()},
                             {"r_linf", dec.r_linf},
                             {"residual_linf", dec.residual_linf},
                             {"relative_noise", relative_noise(sim.op, truth.beta0, sim.noise)}};
  if (truth.s0() > 0) {
    const OracleRatios ratios = oracle_error_check(sol.beta_hat, truth.beta0, truth.s0(), n, p);
    report["oracle"] = {{"c2", ratios.c2}, {"c1", ratios.c1}};
  }

  const CoverageReport coverage = empirical_coverage(study, opts.coverage_trials, config.alpha);
  report["coverage"] = {{"trials", coverage.trials},
                        {"alpha", config.alpha},
                        {"support", number_or_null(coverage.support)},
                        {"off_support", number_or_null(coverage.off_support)},
                        {"overall", coverage.overall},
                        {"unconverged", coverage.unconverged}};

  std::vector<std::size_t> n_values;
  for (double f : opts.sweep_fractions) {
    n_values.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(f * static_cast<double>(p)))));
  }
  ojson sweep = ojson::array();
  for (const auto& row : bias_decay_study(study, n_values, opts.seeds)) {
    sweep.push_back({{"n", row.n}, {"median_r_linf", row.median_r_linf}});
  }
  report["bias_sweep"] = sweep;

  if (opts.rip_order > 0) {
    if (p > opts.rip_max_p) {
      report["rip"] = {{"skipped", fmt::format("p = {} exceeds the brute-force limit {}", p, opts.rip_max_p)}};
    } else {
      const ComplexMatrix normalized = dense_matrix(sim.op.pattern()) / std::sqrt(static_cast<double>(n));
      ojson deltas = ojson::array();
      for (std::size_t s = 1; s <= opts.rip_order; ++s) deltas.push_back({{"s", s}, {"delta", rip_bruteforce(normalized, s)}});
      report["rip"] = deltas;
    }
  }

  FileSet files(manifest);
  files.add("diagnostics.json", dump(report));
  return files.commit();
}

std::vector<fs::path> cmd_phantom(const RunManifest& manifest) {
  manifest.validate();
  const GroundTruth truth = load_ground_truth(manifest, manifest.config);
  std::ostringstream image;
  write_csv_image(image, magnitude_image(truth.beta0, truth.rows, truth.cols));
  ojson meta = manifest_to_json(manifest);
  meta["rows"] = truth.rows;
  meta["cols"] = truth.cols;
  meta["s0"] = truth.s0();
  meta["support"] = truth.support;

  FileSet files(manifest);
  files.add("phantom.csv", image.str());
  files.add("phantom_complex.csv", signal_csv(truth.beta0));
  files.add("phantom.json", dump(meta));
  if (manifest.emit_plots) files.add("phantom.svg", render_magnitude_svg(truth.beta0, truth.rows, truth.cols));
  return files.commit();
}

std::vector<fs::path> run(const RunManifest& manifest) {
  switch (manifest.command) {
    case Command::kReconstruct: return cmd_reconstruct(manifest);
    case Command::kTrials: return cmd_trials(manifest);
    case Command::kTable: return cmd_table(manifest);
    case Command::kDiagnostics: return cmd_diagnostics(manifest);
    case Command::kPhantom: return cmd_phantom(manifest);
  }
  return {};
}

namespace {

std::vector<std::size_t> parse_phantom(const std::string& text) {
  const std::string key = "s0=";
  if (text.rfind(key, 0) != 0) throw DomainError("--phantom expects s0=<int>[,<int>...], got '" + text + "'");
  std::vector<std::size_t> values;
  std::stringstream ss(text.substr(key.size()));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const long v = std::stol(item, &pos);
      if (pos != item.size() || v < 1) throw std::invalid_argument(item);
      values.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw DomainError("--phantom: bad sparsity '" + item + "'");
    }
  }
  if (values.empty()) throw DomainError("--phantom: no sparsity given");
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse recovery from subsampled Fourier data with debiased-LASSO confidence regions"};
  app.set_config("--config", "", "flat key=value file mirroring the flag names");
  app.require_subcommand(1);
  app.fallthrough();

  RunManifest manifest;
  ExperimentConfig& cfg = manifest.config;
  std::string sampling = "replacement";
  std::string lambda_scale = "sum";
  std::string phantom;
  std::string input;
  std::vector<double> thresholds{cfg.threshold};
  bool use_cv = false;
  std::size_t threads = default_thread_count();

  app.add_option("--p", manifest.p, "signal dimension for phantoms (image shape chosen automatically)");
  app.add_option("--n-frac", cfg.n_fraction, "fraction of rows sampled, n = round(n_frac * p)")->capture_default_str();
  app.add_option("--sigma", cfg.sigma, "noise level of the simulated measurements")->capture_default_str();
  app.add_option("--sigma-known", cfg.sigma_known, "use --sigma for lambda_0 and the radius instead of estimating it")
      ->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "significance level")->capture_default_str();
  app.add_option("--threshold", thresholds, "sparsification threshold(s); table accepts a comma list")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--lambda-multiple", cfg.lambda_multiple, "lambda as a multiple of lambda_0")->capture_default_str();
  app.add_option("--lambda-scale", lambda_scale, "lambda calibrated against the sum (1/2 ||.||^2) or mean (1/2n ||.||^2) data fit")
      ->check(CLI::IsMember({"sum", "mean"}))
      ->capture_default_str();
  app.add_flag("--cv", use_cv, "choose lambda by cross validation over multiples of lambda_0");
  app.add_option("--cv-folds", cfg.cv_folds, "cross-validation folds")->capture_default_str();
  app.add_option("--cv-multiples", cfg.cv_multiples, "candidate multiples of lambda_0")->delimiter(',');
  app.add_option("--trials", cfg.trials, "number of realizations")->capture_default_str();
  app.add_option("--seed", cfg.master_seed, "master seed")->capture_default_str();
  app.add_option("--sampling", sampling, "row sampling")->check(CLI::IsMember({"replacement", "distinct"}))->capture_default_str();
  app.add_option("--K", cfg.K, "constant K in lambda_0")->capture_default_str();
  app.add_option("--max-iters", cfg.solver.max_iters, "solver iteration cap")->capture_default_str();
  app.add_option("--tol-kkt", cfg.solver.tol_kkt, "relative KKT tolerance")->capture_default_str();
  app.add_option("--input", input, "ground-truth image (.pgm or .csv)");
  app.add_option("--phantom", phantom, "synthetic phantom, s0=<int>[,<int>...]");
  app.add_option("--phantom-min", manifest.phantom.min_magnitude, "smallest phantom magnitude")->capture_default_str();
  app.add_option("--phantom-max", manifest.phantom.max_magnitude, "largest phantom magnitude")->capture_default_str();
  app.add_option("--phantom-seed", manifest.phantom.seed, "phantom seed")->capture_default_str();
  app.add_option("--out", manifest.output_dir, "output directory")->capture_default_str();
  app.add_flag("--plots", manifest.emit_plots, "write SVG plots");
  app.add_option("--k", manifest.plot_k, "number of intervals in the interval plot")->capture_default_str();
  app.add_option("--sweep", manifest.diagnostics.sweep_fractions, "n fractions for the bias sweep")->delimiter(',');
  app.add_option("--seeds", manifest.diagnostics.seeds, "seeds per n in the bias sweep")->capture_default_str();
  app.add_option("--coverage-trials", manifest.diagnostics.coverage_trials, "trials for empirical coverage")
      ->capture_default_str();
  app.add_option("--rip-order", manifest.diagnostics.rip_order, "brute-force RIP up to this order (tiny p only)")
      ->capture_default_str();

  const std::vector<std::pair<Command, std::string>> commands{
      {Command::kReconstruct, "single pass: reconstruct, debias and write regions"},
      {Command::kTrials, "repeat the pipeline over fresh patterns and noise"},
      {Command::kTable, "one aggregated row per threshold or phantom sparsity"},
      {Command::kDiagnostics, "bias/noise decomposition, coverage, oracle ratios, RIP, bias sweep"},
      {Command::kPhantom, "write a synthetic sparse phantom"},
  };
  for (const auto& [command, help] : commands) app.add_subcommand(to_string(command), help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    for (const auto& [command, help] : commands) {
      if (app.got_subcommand(to_string(command))) manifest.command = command;
    }
    cfg.sampling_mode = parse_sampling_mode(sampling);
    cfg.lambda_scale = parse_lambda_scale(lambda_scale);
    if (use_cv) cfg.lambda_multiple.reset();
    cfg.threads = threads;
    if (!thresholds.empty()) cfg.threshold = thresholds.front();
    manifest.thresholds = thresholds;
    if (!input.empty()) manifest.input_path = input;
    if (!phantom.empty()) manifest.phantom_s0 = parse_phantom(phantom);
    if (manifest.p == 0 && !manifest.input_path) manifest.p = 2048;

    for (const auto& path : run(manifest)) std::cout << path.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace csuq::cli
