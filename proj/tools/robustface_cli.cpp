#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "robustface/classify.hpp"
#include "robustface/corruptions.hpp"
#include "robustface/dataio.hpp"
#include "robustface/errors.hpp"
#include "robustface/experiment.hpp"
#include "robustface/rng.hpp"
#include "robustface/solver.hpp"
#include "robustface/synthetic.hpp"

namespace fs = std::filesystem;
using namespace robustface;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

struct SolverFlags {
  std::string method = "F-LR-IRNNLS";
  SolverConfig solver;
  std::optional<double> gamma;
  double zeta = 8.0;
};

struct CorruptionFlags {
  double occlusion = 0.0;
  double occlusion_max = 0.0;
  double pixels = 0.0;
  std::string patch;
};

struct DataFlags {
  std::string manifest;
  std::string resize;
  SyntheticSpec synthetic;
  int synth_rows = 24;
  int synth_cols = 21;
};

void add_solver_flags(CLI::App& app, SolverFlags& f) {
  SolverConfig& s = f.solver;
  app.add_option("--method", f.method,
                 "F-LR-IRNNLS, F-IRNNLS, F-IRLS, F-IRSC, F-LR-IRLS, F-LR-IRSC, SRC, CR-RLS or LR3")
      ->capture_default_str();
  app.add_option("--lambda-star", s.lambda_star, "Nuclear-norm weight")->capture_default_str();
  app.add_option("--lambda-reg", s.lambda_reg, "l1 / l2 coefficient weight")->capture_default_str();
  app.add_option("--rho1", s.rho1, "Penalty on y - Ta = e")->capture_default_str();
  app.add_option("--rho2", s.rho2, "Penalty on a = z")->capture_default_str();
  app.add_option("--eps1", s.eps1, "Tolerance on ||y - Ta - e||")->capture_default_str();
  app.add_option("--eps2", s.eps2, "Tolerance on ||a - z||")->capture_default_str();
  app.add_option("--eps3", s.eps3, "Relative weight-change tolerance")->capture_default_str();
  app.add_option("--t-max", s.t_max, "Reweighting iterations")->capture_default_str();
  app.add_option("--s-max", s.s_max, "ADMM iterations per reweighting step")->capture_default_str();
  app.add_option("--gamma", f.gamma,
                 "Logistic quantile (default 0.6 with block occlusion, 0.8 otherwise)");
  app.add_option("--zeta", f.zeta, "Logistic steepness numerator")->capture_default_str();
  app.add_flag("--warm-start", s.warm_start_duals, "Carry duals across reweighting steps");
}

void add_corruption_flags(CLI::App& app, CorruptionFlags& f) {
  app.add_option("--occlusion", f.occlusion, "Block occlusion coverage in (0,1)")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--occlusion-max", f.occlusion_max,
                 "Draw each image's coverage uniformly from [--occlusion, this]")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--pixel-corruption", f.pixels, "Fraction of randomly corrupted pixels")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--patch", f.patch, "Occluder image (PGM); default is a seeded texture");
}

void add_data_flags(CLI::App& app, DataFlags& f, bool with_manifest) {
  if (with_manifest) {
    app.add_option("--manifest", f.manifest, "CSV of <split>,<label>,<path>; omit for synthetic data");
    app.add_option("--resize", f.resize, "Resize manifest images to ROWSxCOLS, e.g. 96x84");
  }
  app.add_option("--classes", f.synthetic.classes, "Synthetic classes")->capture_default_str();
  app.add_option("--per-class", f.synthetic.per_class, "Synthetic images per class")
      ->capture_default_str();
  app.add_option("--rows", f.synth_rows, "Synthetic image rows")->capture_default_str();
  app.add_option("--cols", f.synth_cols, "Synthetic image columns")->capture_default_str();
  app.add_option("--test-images", f.synthetic.test_images,
                 "Synthetic test images (0: one per class)")
      ->capture_default_str();
}

ImageGeometry parse_geometry(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw ConfigError("expected ROWSxCOLS, got '" + text + "'");
  try {
    return ImageGeometry(std::stol(text.substr(0, x)), std::stol(text.substr(x + 1)));
  } catch (const std::logic_error&) {
    throw ConfigError("expected ROWSxCOLS, got '" + text + "'");
  }
}

SyntheticSpec synthetic_spec(const DataFlags& f, std::uint64_t seed) {
  SyntheticSpec spec = f.synthetic;
  spec.geometry = ImageGeometry(f.synth_rows, f.synth_cols);
  spec.seed = seed;
  return spec;
}

CorruptionPlan corruption_plan(const CorruptionFlags& f) {
  CorruptionPlan plan;
  plan.block_coverage = f.occlusion;
  plan.block_coverage_max = f.occlusion_max;
  plan.pixel_fraction = f.pixels;
  if (!f.patch.empty()) plan.patch = load_pgm(f.patch);
  return plan;
}

SolverConfig base_config(const SolverFlags& f, const CorruptionPlan& plan) {
  SolverConfig base = f.solver;
  const double gamma = f.gamma.value_or(plan.block_coverage > 0.0 ? 0.6 : 0.8);
  base.weight = WeightFunction::logistic(gamma, f.zeta);
  return base;
}

SolverConfig solver_config(const SolverFlags& f, const CorruptionPlan& plan, Method method) {
  SolverConfig c = method_config(method, base_config(f, plan));
  c.validate();
  return c;
}

Dataset load_data(const DataFlags& f, std::uint64_t seed) {
  if (f.manifest.empty()) return make_synthetic_benchmark(synthetic_spec(f, seed));
  DatasetManifest manifest = load_manifest(f.manifest);
  if (!f.resize.empty()) manifest.geometry = parse_geometry(f.resize);
  return load_dataset(manifest);
}

std::string class_name(const Dataset& ds, int id) {
  return id >= 0 && static_cast<std::size_t>(id) < ds.class_names.size()
             ? ds.class_names[static_cast<std::size_t>(id)]
             : std::to_string(id);
}

CorruptedImage corrupt(const FaceVector& image, const CorruptionPlan& plan, std::uint64_t seed) {
  if (!plan.any()) {
    CorruptedImage out{image, {}};
    out.spec.geometry = image.geometry;
    out.spec.seed = seed;
    return out;
  }
  const FaceVector patch = plan.patch ? *plan.patch
                                      : make_texture_patch(ImageGeometry(64, 64), seed);
  double coverage = plan.block_coverage;
  if (plan.block_coverage_max > coverage) {
    coverage = sample_coverage(plan.block_coverage, plan.block_coverage_max, seed);
  }
  if (coverage > 0.0 && plan.pixel_fraction > 0.0) {
    return mixture_noise(image, plan.pixel_fraction, coverage, patch, seed);
  }
  if (coverage > 0.0) return occlude_block(image, patch, coverage, seed);
  return corrupt_pixels(image, plan.pixel_fraction, seed);
}

struct SingleSolve {
  Dataset data;
  CorruptedImage corrupted;
  SolveResult result;
  ClassificationResult cls;
  int true_class = -1;
  std::string id;
};

struct SingleFlags {
  std::string image;
  int test_index = 0;
  std::uint64_t seed = 1;
};

SingleSolve run_single(const SolverFlags& sf, const CorruptionFlags& cf, const DataFlags& df,
                       const SingleFlags& flags) {
  SingleSolve out;
  out.data = load_data(df, flags.seed);
  FaceVector test;
  if (!flags.image.empty()) {
    test = load_pgm(flags.image);
    if (!(test.geometry == out.data.geometry)) {
      test = resize_nearest(test, out.data.geometry);
    }
    out.id = fs::path(flags.image).stem().string();
  } else {
    if (flags.test_index < 0 || static_cast<std::size_t>(flags.test_index) >= out.data.test.size()) {
      throw ConfigError("--test-index " + std::to_string(flags.test_index) + " out of range (" +
                        std::to_string(out.data.test.size()) + " test images)");
    }
    const auto k = static_cast<std::size_t>(flags.test_index);
    test = out.data.test[k];
    out.true_class = out.data.test_labels[k];
    out.id = k < out.data.test_ids.size() ? out.data.test_ids[k] : "test_" + std::to_string(k);
  }
  const CorruptionPlan plan = corruption_plan(cf);
  const SolverConfig config = solver_config(sf, plan, parse_method(sf.method));
  out.corrupted = corrupt(test, plan, flags.seed);
  const Dictionary dict = build_dictionary(out.data.train, out.data.train_labels);
  const FaceVector y(normalize_unit_l2(out.corrupted.image.values), out.data.geometry);
  out.result = solve(y, dict, config);
  out.cls = identify(y, dict, out.result);
  return out;
}

void print_single(const SingleSolve& s) {
  std::printf("image        %s\n", s.id.c_str());
  if (s.corrupted.spec.kind != CorruptionKind::none) {
    std::printf("corruption   %s\n", s.corrupted.spec.to_record().c_str());
  }
  std::printf("predicted    %s\n", class_name(s.data, s.cls.predicted).c_str());
  if (s.true_class >= 0) std::printf("true         %s\n", class_name(s.data, s.true_class).c_str());
  std::printf("margin       %.6g\n", s.cls.margin);
  int inner = 0;
  for (const int k : s.result.inner_iterations) inner += k;
  std::printf("iterations   %d outer, %d inner\n", s.result.outer_iterations, inner);
  std::printf("converged    %s\n", s.result.converged ? "yes" : "no");
  std::printf("time         %.4f s\n", s.result.wall_time_seconds);
}

void print_report(const ExperimentReport& report) {
  std::printf("method       %s\n", report.method.c_str());
  std::printf("images       %zu\n", report.rows.size());
  std::printf("accuracy     %.4f (%zu correct)\n", report.accuracy(), report.correct());
  std::printf("mean time    %.4f s\n", report.mean_solve_seconds());
  const double loc = report.mean_outlier_localization();
  if (loc == loc) std::printf("localization %.4f\n", loc);
  if (report.numeric_failures() > 0) {
    std::printf("numeric      %zu rows failed\n", report.numeric_failures());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust face identification with reweighted ADMM"};
  app.require_subcommand(1);

  SolverFlags solver_flags;
  CorruptionFlags corruption_flags;
  DataFlags data_flags;
  SingleFlags single;
  std::vector<std::uint64_t> seeds{1};
  int jobs = 1;
  std::string out;
  bool export_weights = false;

  CLI::App* bench = app.add_subcommand("bench", "Run a method over every test image");
  add_solver_flags(*bench, solver_flags);
  add_corruption_flags(*bench, corruption_flags);
  add_data_flags(*bench, data_flags, true);
  bench->add_option("--seed,--seeds", seeds, "One or more seeds")->capture_default_str();
  bench->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_option("--out", out, "Directory for report.csv and weight maps");
  bench->add_flag("--export-weights", export_weights, "Write <imageid>_w.pgm per test image");

  CLI::App* solve_cmd = app.add_subcommand("solve", "Identify a single image");
  CLI::App* export_cmd = app.add_subcommand("export-weights", "Solve one image and write its weight map");
  for (CLI::App* cmd : {solve_cmd, export_cmd}) {
    add_solver_flags(*cmd, solver_flags);
    add_corruption_flags(*cmd, corruption_flags);
    add_data_flags(*cmd, data_flags, true);
    cmd->add_option("--image", single.image, "Test image (PGM); default is a test-split image");
    cmd->add_option("--test-index", single.test_index, "Index into the test split")
        ->capture_default_str();
    cmd->add_option("--seed", single.seed, "Corruption and synthetic-data seed")
        ->capture_default_str();
  }
  solve_cmd->add_option("--out", out, "Directory for the corrupted input and weight map");
  export_cmd->add_option("--out", out, "Output PGM path")->required();

  std::uint64_t synth_seed = 1;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic benchmark as PGM files");
  add_data_flags(*synth, data_flags, false);
  synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
  synth->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (bench->parsed()) {
      ExperimentConfig config;
      if (!data_flags.manifest.empty()) {
        config.manifest = fs::path(data_flags.manifest);
        if (!data_flags.resize.empty()) config.resize = parse_geometry(data_flags.resize);
      } else {
        config.synthetic = synthetic_spec(data_flags, 1);
      }
      config.method = parse_method(solver_flags.method);
      config.corruption = corruption_plan(corruption_flags);
      config.solver = base_config(solver_flags, config.corruption);
      method_config(config.method, config.solver).validate();
      config.seeds = seeds;
      config.jobs = jobs;
      config.out_dir = out;
      config.export_weights = export_weights;
      const ExperimentReport report = run_experiment(config);
      print_report(report);
      if (!report.rows.empty() && report.numeric_failures() == report.rows.size()) {
        return kExitNumeric;
      }
      return kExitOk;
    }
    if (solve_cmd->parsed() || export_cmd->parsed()) {
      const SingleSolve s = run_single(solver_flags, corruption_flags, data_flags, single);
      if (export_cmd->parsed()) {
        const fs::path path(out);
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        export_weight_map(s.result.w, s.data.geometry, path);
        std::printf("wrote %s\n", path.string().c_str());
        return kExitOk;
      }
      print_single(s);
      if (!out.empty()) {
        fs::create_directories(out);
        save_pgm(s.corrupted.image, fs::path(out) / (s.id + "_input.pgm"));
        export_weight_map(s.result.w, s.data.geometry, fs::path(out) / (s.id + "_w.pgm"));
      }
      return kExitOk;
    }
    if (synth->parsed()) {
      const Dataset ds = make_synthetic_benchmark(synthetic_spec(data_flags, synth_seed));
      write_dataset(ds, out);
      std::printf("wrote %zu training and %zu test images to %s\n", ds.train.size(),
                  ds.test.size(), out.c_str());
      return kExitOk;
    }
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return kExitOk;
}
