#include "robustface/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <thread>

#include "robustface/classify.hpp"
#include "robustface/errors.hpp"
#include "robustface/rng.hpp"

namespace robustface {

namespace {

constexpr std::uint64_t kPatchStream = 0x7061746368;  // "patch"
constexpr std::uint64_t kCoverageStream = 0x636f76;   // "cov"

CorruptedImage apply_plan(const FaceVector& image, const CorruptionPlan& plan,
                          const FaceVector& patch, std::uint64_t seed) {
  double coverage = plan.block_coverage;
  if (plan.block_coverage_max > plan.block_coverage) {
    coverage = sample_coverage(plan.block_coverage, plan.block_coverage_max,
                               derive_seed(seed, kCoverageStream));
  }
  if (coverage > 0.0 && plan.pixel_fraction > 0.0) {
    return mixture_noise(image, plan.pixel_fraction, coverage, patch, seed);
  }
  if (coverage > 0.0) return occlude_block(image, patch, coverage, seed);
  if (plan.pixel_fraction > 0.0) return corrupt_pixels(image, plan.pixel_fraction, seed);
  CorruptedImage out{image, {}};
  out.spec.seed = seed;
  out.spec.geometry = image.geometry;
  out.spec.mask.assign(static_cast<std::size_t>(image.size()), false);
  return out;
}

}  // namespace

std::size_t ExperimentReport::correct() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) {
    return !r.numeric_error && r.predicted == r.true_class;
  }));
}

double ExperimentReport::accuracy() const {
  return rows.empty() ? 0.0
                      : static_cast<double>(correct()) / static_cast<double>(rows.size());
}

double ExperimentReport::mean_solve_seconds() const {
  if (rows.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : rows) sum += r.solve_seconds;
  return sum / static_cast<double>(rows.size());
}

double ExperimentReport::mean_outlier_localization() const {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : rows) {
    if (std::isfinite(r.outlier_localization)) {
      sum += r.outlier_localization;
      ++count;
    }
  }
  return count ? sum / static_cast<double>(count)
               : std::numeric_limits<double>::quiet_NaN();
}

std::size_t ExperimentReport::numeric_failures() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.numeric_error; }));
}

double outlier_localization(const Eigen::Ref<const WeightVector>& w,
                            const std::vector<bool>& mask) {
  const auto d = static_cast<std::size_t>(w.size());
  if (mask.size() != d) throw InvalidGeometry("outlier_localization: mask length mismatch");
  const std::size_t k = std::max<std::size_t>(d / 4, 1);
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return w[static_cast<Index>(a)] < w[static_cast<Index>(b)];
  });
  std::size_t inside = 0;
  for (std::size_t i = 0; i < k; ++i) inside += mask[idx[i]] ? 1 : 0;
  return static_cast<double>(inside) / static_cast<double>(k);
}

ExperimentReport run_on_dataset(const Dataset& dataset,
                                const ExperimentConfig& config,
                                std::uint64_t seed) {
  ExperimentReport report;
  report.method = std::string(method_name(config.method));
  const std::size_t n_test = dataset.test.size();
  report.rows.resize(n_test);
  if (n_test == 0) return report;

  const SolverConfig solver = method_config(config.method, config.solver);
  solver.validate();
  const Dictionary dict = build_dictionary(dataset.train, dataset.train_labels);
  const GramCache cache(dict.columns(), solver.ridge());
  const FaceVector patch =
      config.corruption.patch
          ? *config.corruption.patch
          : make_texture_patch(ImageGeometry(64, 64), derive_seed(seed, kPatchStream));
  const bool write_maps = config.export_weights && !config.out_dir.empty();

  auto run_one = [&](std::size_t i) {
    ReportRow& row = report.rows[i];
    row.image_id = dataset.test_ids.size() > i ? dataset.test_ids[i]
                                               : "test_" + std::to_string(i);
    if (config.seeds.size() > 1) row.image_id += "_s" + std::to_string(seed);
    row.seed = seed;
    row.true_class = dataset.test_labels[i];
    const CorruptedImage corrupted =
        apply_plan(dataset.test[i], config.corruption, patch, derive_seed(seed, i));
    row.corruption = corrupted.spec.to_record();
    try {
      const FaceVector y(normalize_unit_l2(corrupted.image.values), dataset.geometry);
      const SolveResult result =
          solve(y.values, dict.columns(), dict.geometry(), cache, solver);
      const ClassificationResult cls = identify(y, dict, result);
      row.predicted = cls.predicted;
      row.margin = cls.margin;
      row.solve_seconds = result.wall_time_seconds;
      row.outer_iterations = result.outer_iterations;
      row.inner_iterations =
          std::accumulate(result.inner_iterations.begin(), result.inner_iterations.end(), 0);
      row.converged = result.converged;
      row.outlier_localization =
          corrupted.spec.mask_count() > 0
              ? outlier_localization(result.w, corrupted.spec.mask)
              : std::numeric_limits<double>::quiet_NaN();
      if (write_maps) {
        export_weight_map(result.w, dataset.geometry,
                          config.out_dir / (row.image_id + "_w.pgm"));
      }
    } catch (const NumericError&) {
      row.numeric_error = true;
      row.predicted = -1;
      row.outlier_localization = std::numeric_limits<double>::quiet_NaN();
    } catch (const DegenerateInput&) {
      row.numeric_error = true;
      row.predicted = -1;
      row.outlier_localization = std::numeric_limits<double>::quiet_NaN();
    }
  };

  const auto jobs = static_cast<std::size_t>(std::max(1, config.jobs));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n_test; ++i) run_one(i);
    return report;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  for (std::size_t j = 0; j < std::min(jobs, n_test); ++j) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n_test; i = next++) run_one(i);
    });
  }
  for (auto& w : workers) w.join();
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.seeds.empty()) throw ConfigError("experiment needs at least one seed");
  std::optional<Dataset> fixed;
  if (config.manifest) {
    DatasetManifest manifest = load_manifest(*config.manifest);
    manifest.geometry = config.resize;
    fixed = load_dataset(manifest);
  } else if (!config.synthetic) {
    throw ConfigError("experiment needs a manifest or a synthetic benchmark");
  }
  if (!config.out_dir.empty()) std::filesystem::create_directories(config.out_dir);

  ExperimentReport report;
  report.method = std::string(method_name(config.method));
  for (const std::uint64_t seed : config.seeds) {
    ExperimentReport part;
    if (fixed) {
      part = run_on_dataset(*fixed, config, seed);
    } else {
      SyntheticSpec spec = *config.synthetic;
      spec.seed = seed;
      part = run_on_dataset(make_synthetic_benchmark(spec), config, seed);
    }
    report.rows.insert(report.rows.end(), part.rows.begin(), part.rows.end());
  }
  if (!config.out_dir.empty()) {
    std::ofstream out(config.out_dir / "report.csv");
    if (!out) throw IoError("cannot write " + (config.out_dir / "report.csv").string());
    write_report_csv(report, out);
  }
  return report;
}

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
  out << "# " << kReportVersion << " method=" << report.method << "\n";
  out << "image_id,seed,true_class,predicted_class,correct,margin,solve_seconds,"
         "outer_iterations,inner_iterations,converged,status,outlier_localization,"
         "corruption\n";
  out.precision(10);
  for (const auto& r : report.rows) {
    out << r.image_id << ',' << r.seed << ',' << r.true_class << ',' << r.predicted << ','
        << (!r.numeric_error && r.predicted == r.true_class ? 1 : 0) << ',' << r.margin
        << ',' << r.solve_seconds << ',' << r.outer_iterations << ','
        << r.inner_iterations << ',' << (r.converged ? 1 : 0) << ','
        << (r.numeric_error ? "numeric_error" : "ok") << ',';
    if (std::isfinite(r.outlier_localization)) out << r.outlier_localization;
    out << ',' << '"' << r.corruption << '"' << '\n';
  }
}

}  // namespace robustface
