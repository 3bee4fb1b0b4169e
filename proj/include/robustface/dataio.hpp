#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robustface/model.hpp"
#include "robustface/weights.hpp"

namespace robustface {

// Binary 8-bit PGM (P5, maxval 255). Intensities map to [0,1] by v / 255.
// Throws ParseError naming the byte offset of the first problem.
FaceVector decode_pgm(std::span<const unsigned char> bytes);
FaceVector load_pgm(const std::filesystem::path& path);

struct PgmWriteStats {
  std::size_t clamped = 0;  // values outside [0,1] that were clamped
};

// Quantizes round(v * 255) after clamping to [0,1]; header "P5\n<cols> <rows>\n255\n".
std::vector<unsigned char> encode_pgm(const FaceVector& image,
                                      PgmWriteStats* stats = nullptr);
// Throws IoError.
PgmWriteStats save_pgm(const FaceVector& image, const std::filesystem::path& path);

// Nearest-neighbour resampling: target pixel i samples source pixel
// floor((i + 1/2) * src / dst).
FaceVector resize_nearest(const FaceVector& image, const ImageGeometry& target);

// Weight map as an image: weights in [0,1] become intensities 0..255, so
// detected outliers appear dark.
PgmWriteStats export_weight_map(const Eigen::Ref<const WeightVector>& w,
                                const ImageGeometry& geometry,
                                const std::filesystem::path& path);

enum class Split { train, test };

struct ManifestRecord {
  Split split = Split::train;
  std::string label;
  int class_id = 0;  // dense id, labels remapped in sorted order
  std::filesystem::path path;  // as written (relative to the manifest)
  std::size_t line = 0;
};

// Lines `<split>,<label>,<relative path>`; blank lines and lines starting
// with '#' are ignored.
struct DatasetManifest {
  std::filesystem::path base_dir;
  std::vector<ManifestRecord> records;
  std::vector<std::string> class_names;  // index = class id
  std::optional<ImageGeometry> geometry;  // resize target, if any

  std::filesystem::path resolve(const ManifestRecord& r) const {
    return base_dir / r.path;
  }
};

// Parses and validates (unique paths, every test label has training data).
// Throws ParseError with the line number.
DatasetManifest parse_manifest(std::istream& in,
                               const std::filesystem::path& base_dir = {});
// Additionally checks that every referenced file exists; IoError lists the
// first 10 missing files.
DatasetManifest load_manifest(const std::filesystem::path& path);

// Images of one experiment, already in [0,1] model space.
struct Dataset {
  ImageGeometry geometry;
  std::vector<FaceVector> train;
  std::vector<int> train_labels;
  std::vector<FaceVector> test;
  std::vector<int> test_labels;
  std::vector<std::string> test_ids;
  std::vector<std::string> class_names;
};

// Loads every image of the manifest, resizing to manifest.geometry when set
// (otherwise all images must share the first image's geometry).
Dataset load_dataset(const DatasetManifest& manifest);

// Writes the dataset as PGM files plus `manifest.csv` into `dir`.
void write_dataset(const Dataset& dataset, const std::filesystem::path& dir);

}  // namespace robustface
