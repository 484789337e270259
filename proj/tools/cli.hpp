#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "csuq/harness.hpp"
#include "csuq/simulation.hpp"

namespace csuq::cli {

enum class Command { kReconstruct, kTrials, kTable, kDiagnostics, kPhantom };

std::string to_string(Command command);

struct DiagnosticsOptions {
  std::vector<double> sweep_fractions{0.2, 0.4, 0.8};
  std::size_t seeds = 50;
  std::size_t coverage_trials = 50;
  /// 0 disables the brute-force RIP check.
  std::size_t rip_order = 0;
  std::size_t rip_max_p = 64;
};

struct RunManifest {
  Command command = Command::kReconstruct;
  ExperimentConfig config;
  std::optional<std::filesystem::path> input_path;
  /// Used when no input image is given; `phantom_s0` lists one sparsity per table row.
  PhantomSpec phantom;
  std::vector<std::size_t> phantom_s0;
  std::size_t p = 0;  // 0: take p from the input image or phantom shape
  std::vector<double> thresholds;
  std::filesystem::path output_dir = "out";
  bool emit_plots = false;
  std::size_t plot_k = 68;
  DiagnosticsOptions diagnostics;

  void validate() const;
};

/// rows x cols with rows the largest divisor of p not above sqrt(p).
std::pair<std::size_t, std::size_t> image_shape_for(std::size_t p);

/// Ground truth from the input image (thresholded with config.threshold) or the phantom.
GroundTruth load_ground_truth(const RunManifest& manifest, const ExperimentConfig& config,
                              std::optional<std::size_t> phantom_s0 = std::nullopt);

nlohmann::ordered_json config_to_json(const ExperimentConfig& config);
nlohmann::ordered_json manifest_to_json(const RunManifest& manifest);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string signal_csv(const ComplexSignal& v);

/// Error-bar plot of the k coordinates with the largest |beta0| (or |center|
/// when beta0 is absent), sorted descending: real part of each center with a
/// +/- radius bar, ground truth overlaid as crosses.
std::string render_intervals_svg(const ConfidenceRegions& regions, const ComplexSignal* beta0, std::size_t k);

/// Grayscale heat map of |v| on a rows x cols grid.
std::string render_magnitude_svg(const ComplexSignal& v, std::size_t rows, std::size_t cols);

/// Every command returns the list of files it wrote.
std::vector<std::filesystem::path> cmd_reconstruct(const RunManifest& manifest);
std::vector<std::filesystem::path> cmd_trials(const RunManifest& manifest);
std::vector<std::filesystem::path> cmd_table(const RunManifest& manifest);
std::vector<std::filesystem::path> cmd_diagnostics(const RunManifest& manifest);
std::vector<std::filesystem::path> cmd_phantom(const RunManifest& manifest);
std::filesystem::path cmd_plot_intervals(const RunManifest& manifest, const ExperimentResult& result,
                                         const GroundTruth* truth, std::size_t k);

std::vector<std::filesystem::path> run(const RunManifest& manifest);

/// Parses argv, runs the command and returns the process exit code.
int main(int argc, char** argv);

}  // namespace csuq::cli
