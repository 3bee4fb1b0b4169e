#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robustface/model.hpp"

namespace robustface {

enum class CorruptionKind { none, block, pixel, mixture };

// What was done to a test image; enough to regenerate it from the seed.
struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::none;
  double block_coverage = 0.0;   // requested block area / d
  double pixel_fraction = 0.0;   // requested corrupted-pixel fraction
  std::uint64_t seed = 0;
  Index block_row = 0;           // top-left corner
  Index block_col = 0;
  Index block_side = 0;          // 0 when no block was placed
  ImageGeometry geometry;
  std::vector<bool> mask;        // column-major, true = corrupted pixel

  std::size_t mask_count() const;
  // Fraction of pixels inside the mask.
  double actual_coverage() const;
  // `kind=block;block=0.25;pixel=0;seed=7;row=3;col=5;side=10;rows=20;cols=20`
  std::string to_record() const;
  // Inverse of to_record (the mask is not part of the record). Throws
  // ParseError.
  static CorruptionSpec from_record(const std::string& record);
};

struct CorruptedImage {
  FaceVector image;
  CorruptionSpec spec;
};

// Side length of the square block for a coverage fraction:
// round(sqrt(coverage * d)), clamped to [1, min(rows, cols)].
Index block_side_for(double coverage, const ImageGeometry& geometry);

// Pastes `patch` (nearest-neighbour resized) as a square block at a uniformly
// random feasible position. Throws ConfigError unless 0 < coverage < 1 and
// coverage * d >= 1.
CorruptedImage occlude_block(const FaceVector& image, const FaceVector& patch,
                             double coverage, std::uint64_t seed);

// Replaces floor(fraction * d) distinct pixels with uniform draws on [0,255]
// scaled into [0,1]. Throws ConfigError unless 0 <= fraction <= 1.
CorruptedImage corrupt_pixels(const FaceVector& image, double fraction,
                              std::uint64_t seed);

// Pixel corruption first, then block occlusion; mask is the union. The block
// placement uses `seed` itself, so a zero pixel fraction reproduces
// occlude_block exactly.
CorruptedImage mixture_noise(const FaceVector& image, double pixel_fraction,
                             double block_coverage, const FaceVector& patch,
                             std::uint64_t seed);

// Coverage drawn uniformly on [lo, hi] (the varying-occlusion protocol).
double sample_coverage(double lo, double hi, std::uint64_t seed);

// Random-phase texture with a 1/f^exponent amplitude spectrum, min-max scaled
// to [0,1]. Used as the default occluder.
inline constexpr double kDefaultSpectralExponent = 1.0;
FaceVector make_texture_patch(const ImageGeometry& geometry, std::uint64_t seed,
                              double spectral_exponent = kDefaultSpectralExponent);

}  // namespace robustface
