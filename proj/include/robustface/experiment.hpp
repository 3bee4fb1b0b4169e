#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "robustface/corruptions.hpp"
#include "robustface/dataio.hpp"
#include "robustface/solver.hpp"
#include "robustface/synthetic.hpp"

namespace robustface {

// How each test image is degraded before it is solved.
struct CorruptionPlan {
  double block_coverage = 0.0;  // 0 = no block
  // When above block_coverage, each image draws its coverage uniformly from
  // [block_coverage, block_coverage_max].
  double block_coverage_max = 0.0;
  double pixel_fraction = 0.0;
  std::optional<FaceVector> patch;  // default: a seeded synthetic texture

  bool any() const { return block_coverage > 0.0 || pixel_fraction > 0.0; }
};

struct ExperimentConfig {
  std::optional<std::filesystem::path> manifest;
  std::optional<ImageGeometry> resize;       // manifest images only
  std::optional<SyntheticSpec> synthetic;    // used when no manifest
  Method method = Method::f_lr_irnnls;
  SolverConfig solver;                       // method_config is applied on top
  CorruptionPlan corruption;
  std::vector<std::uint64_t> seeds{1};
  int jobs = 1;
  std::filesystem::path out_dir;             // empty: write nothing
  bool export_weights = false;
};

struct ReportRow {
  std::string image_id;
  std::uint64_t seed = 0;
  int true_class = 0;
  int predicted = -1;
  double margin = 0.0;
  double solve_seconds = 0.0;
  int outer_iterations = 0;
  int inner_iterations = 0;  // summed over outer iterations
  bool converged = false;
  bool numeric_error = false;
  // Share of the d/4 smallest weights that fall inside the corruption mask;
  // NaN when nothing was corrupted.
  double outlier_localization = 0.0;
  std::string corruption;  // CorruptionSpec::to_record()
};

struct ExperimentReport {
  std::string method;
  std::vector<ReportRow> rows;

  std::size_t correct() const;
  double accuracy() const;  // correct / rows, failed rows count as wrong
  double mean_solve_seconds() const;
  double mean_outlier_localization() const;  // over rows with a mask
  std::size_t numeric_failures() const;
};

inline constexpr const char* kReportVersion = "robustface-report v1";

// Fraction of the floor(d/4) smallest weights whose pixels lie in `mask`.
double outlier_localization(const Eigen::Ref<const WeightVector>& w,
                            const std::vector<bool>& mask);

// Solves and classifies every test image of `dataset` once, corrupting it
// with seeds derived from `seed`. Rows keep dataset order regardless of jobs.
ExperimentReport run_on_dataset(const Dataset& dataset,
                                const ExperimentConfig& config,
                                std::uint64_t seed);

// Full run: resolves the data source, loops over seeds (synthetic data is
// regenerated per seed), writes report.csv and weight maps into out_dir when
// set. Throws IoError / ParseError when the data source is unusable.
ExperimentReport run_experiment(const ExperimentConfig& config);

void write_report_csv(const ExperimentReport& report, std::ostream& out);

}  // namespace robustface
