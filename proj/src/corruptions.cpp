#include "robustface/corruptions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "robustface/dataio.hpp"
#include "robustface/errors.hpp"
#include "robustface/rng.hpp"

namespace robustface {

namespace {

constexpr std::uint64_t kPixelStream = 0x70697865;  // "pixe"

std::string_view kind_name(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::none: return "none";
    case CorruptionKind::block: return "block";
    case CorruptionKind::pixel: return "pixel";
    case CorruptionKind::mixture: return "mixture";
  }
  return "none";
}

}  // namespace

std::size_t CorruptionSpec::mask_count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

double CorruptionSpec::actual_coverage() const {
  return mask.empty() ? 0.0
                      : static_cast<double>(mask_count()) /
                            static_cast<double>(mask.size());
}

std::string CorruptionSpec::to_record() const {
  std::ostringstream out;
  out.precision(17);
  out << "kind=" << kind_name(kind) << ";block=" << block_coverage
      << ";pixel=" << pixel_fraction << ";seed=" << seed << ";row=" << block_row
      << ";col=" << block_col << ";side=" << block_side
      << ";rows=" << geometry.rows << ";cols=" << geometry.cols;
  return out.str();
}

CorruptionSpec CorruptionSpec::from_record(const std::string& record) {
  std::map<std::string, std::string> fields;
  std::istringstream in(record);
  std::string item;
  while (std::getline(in, item, ';')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ParseError("corruption record: malformed field '" + item + "'");
    }
    fields[item.substr(0, eq)] = item.substr(eq + 1);
  }
  auto get = [&](const char* key) -> const std::string& {
    const auto it = fields.find(key);
    if (it == fields.end()) {
      throw ParseError(std::string("corruption record: missing '") + key + "'");
    }
    return it->second;
  };
  CorruptionSpec spec;
  try {
    const std::string& kind = get("kind");
    if (kind == "none") spec.kind = CorruptionKind::none;
    else if (kind == "block") spec.kind = CorruptionKind::block;
    else if (kind == "pixel") spec.kind = CorruptionKind::pixel;
    else if (kind == "mixture") spec.kind = CorruptionKind::mixture;
    else throw ParseError("corruption record: unknown kind '" + kind + "'");
    spec.block_coverage = std::stod(get("block"));
    spec.pixel_fraction = std::stod(get("pixel"));
    spec.seed = std::stoull(get("seed"));
    spec.block_row = std::stoll(get("row"));
    spec.block_col = std::stoll(get("col"));
    spec.block_side = std::stoll(get("side"));
    spec.geometry = ImageGeometry(std::stoll(get("rows")), std::stoll(get("cols")));
  } catch (const std::logic_error&) {
    throw ParseError("corruption record: bad number in '" + record + "'");
  }
  return spec;
}

Index block_side_for(double coverage, const ImageGeometry& geometry) {
  const auto side = static_cast<Index>(
      std::lround(std::sqrt(coverage * static_cast<double>(geometry.size()))));
  return std::clamp<Index>(side, 1, std::min(geometry.rows, geometry.cols));
}

CorruptedImage occlude_block(const FaceVector& image, const FaceVector& patch,
                             double coverage, std::uint64_t seed) {
  const ImageGeometry& g = image.geometry;
  if (!(coverage > 0.0 && coverage < 1.0)) {
    throw ConfigError("occlusion coverage must lie in (0,1), got " +
                      std::to_string(coverage));
  }
  if (coverage * static_cast<double>(g.size()) < 1.0) {
    throw ConfigError("occlusion coverage covers less than one pixel");
  }
  const Index side = block_side_for(coverage, g);
  SplitMix64 rng(seed);
  const auto row = static_cast<Index>(
      rng.uniform_index(static_cast<std::uint64_t>(g.rows - side + 1)));
  const auto col = static_cast<Index>(
      rng.uniform_index(static_cast<std::uint64_t>(g.cols - side + 1)));
  const FaceVector block = resize_nearest(patch, ImageGeometry(side, side));

  CorruptedImage out{image, {}};
  CorruptionSpec& spec = out.spec;
  spec.kind = CorruptionKind::block;
  spec.block_coverage = coverage;
  spec.seed = seed;
  spec.block_row = row;
  spec.block_col = col;
  spec.block_side = side;
  spec.geometry = g;
  spec.mask.assign(static_cast<std::size_t>(g.size()), false);
  for (Index c = 0; c < side; ++c) {
    for (Index r = 0; r < side; ++r) {
      const Index idx = (col + c) * g.rows + (row + r);
      out.image.values[idx] = block.values[c * side + r];
      spec.mask[static_cast<std::size_t>(idx)] = true;
    }
  }
  return out;
}

CorruptedImage corrupt_pixels(const FaceVector& image, double fraction,
                              std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw ConfigError("pixel corruption fraction must lie in [0,1]");
  }
  const auto d = static_cast<std::size_t>(image.size());
  const auto count = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(d)));
  CorruptedImage out{image, {}};
  CorruptionSpec& spec = out.spec;
  spec.kind = CorruptionKind::pixel;
  spec.pixel_fraction = fraction;
  spec.seed = seed;
  spec.geometry = image.geometry;
  spec.mask.assign(d, false);

  SplitMix64 rng(seed);
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `count` slots are a uniform sample.
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(d - i));
    std::swap(idx[i], idx[j]);
    const double value = rng.uniform(0.0, 255.0) / 255.0;
    out.image.values[static_cast<Index>(idx[i])] = value;
    spec.mask[idx[i]] = true;
  }
  return out;
}

CorruptedImage mixture_noise(const FaceVector& image, double pixel_fraction,
                             double block_coverage, const FaceVector& patch,
                             std::uint64_t seed) {
  CorruptedImage pixels =
      corrupt_pixels(image, pixel_fraction, derive_seed(seed, kPixelStream));
  CorruptedImage out = occlude_block(pixels.image, patch, block_coverage, seed);
  for (std::size_t i = 0; i < out.spec.mask.size(); ++i) {
    out.spec.mask[i] = out.spec.mask[i] || pixels.spec.mask[i];
  }
  out.spec.kind = CorruptionKind::mixture;
  out.spec.pixel_fraction = pixel_fraction;
  return out;
}

double sample_coverage(double lo, double hi, std::uint64_t seed) {
  if (!(lo <= hi)) throw ConfigError("coverage range must satisfy lo <= hi");
  SplitMix64 rng(seed);
  // Closed interval: scale 53-bit integers by 1/(2^53 - 1).
  const double u = static_cast<double>(rng.next() >> 11) /
                   static_cast<double>((std::uint64_t{1} << 53) - 1);
  return lo + (hi - lo) * u;
}

FaceVector make_texture_patch(const ImageGeometry& geometry, std::uint64_t seed,
                              double spectral_exponent) {
  if (!(spectral_exponent >= 0.0) || !std::isfinite(spectral_exponent)) {
    throw ConfigError("make_texture_patch: spectral exponent must be finite and >= 0");
  }
  SplitMix64 rng(seed);
  const Index kmax = std::max<Index>(1, std::min(geometry.rows, geometry.cols) / 4);
  const double two_pi = 2.0 * std::numbers::pi;
  Eigen::MatrixXd img = Eigen::MatrixXd::Zero(geometry.rows, geometry.cols);
  // Half plane of integer frequencies (cycles across the patch), random phase.
  for (Index kx = 0; kx <= kmax; ++kx) {
    for (Index ky = -kmax; ky <= kmax; ++ky) {
      if (kx == 0 && ky <= 0) continue;
      const double f = std::hypot(static_cast<double>(kx), static_cast<double>(ky));
      if (f > static_cast<double>(kmax)) continue;
      const double amp = std::pow(f, -spectral_exponent);
      const double phase = rng.uniform(0.0, two_pi);
      for (Index c = 0; c < geometry.cols; ++c) {
        const double x = static_cast<double>(kx * c) / static_cast<double>(geometry.cols);
        for (Index r = 0; r < geometry.rows; ++r) {
          const double y = static_cast<double>(ky * r) / static_cast<double>(geometry.rows);
          img(r, c) += amp * std::cos(two_pi * (x + y) + phase);
        }
      }
    }
  }
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(img.data(), geometry.size());
  const double lo = v.minCoeff();
  const double hi = v.maxCoeff();
  v = (v.array() - lo) / std::max(hi - lo, 1e-12);
  return {std::move(v), geometry};
}

}  // namespace robustface
