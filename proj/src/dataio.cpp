#include "robustface/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include "robustface/errors.hpp"

namespace robustface {

namespace fs = std::filesystem;

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  long read_int(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000) fail(start, std::string("oversized ") + what);
      ++pos_;
    }
    if (pos_ == start) fail(start, std::string("expected ") + what);
    return value;
  }

  [[noreturn]] static void fail(std::size_t offset, const std::string& msg) {
    throw ParseError("pgm: " + msg + " at byte offset " + std::to_string(offset));
  }

  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 0;
};

std::vector<unsigned char> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

FaceVector decode_pgm(std::span<const unsigned char> bytes) {
  HeaderReader reader(bytes);
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    HeaderReader::fail(0, "bad magic (only binary P5 is supported)");
  }
  reader.pos_ = 2;
  const long cols = reader.read_int("width");
  const long rows = reader.read_int("height");
  const std::size_t maxval_offset = reader.offset();
  const long maxval = reader.read_int("maxval");
  if (maxval != 255) {
    HeaderReader::fail(maxval_offset, "maxval " + std::to_string(maxval) +
                                          " unsupported (need 255)");
  }
  if (cols < 1 || rows < 1) HeaderReader::fail(reader.offset(), "empty image");
  if (reader.offset() >= bytes.size() || !std::isspace(bytes[reader.offset()])) {
    HeaderReader::fail(reader.offset(), "missing whitespace after header");
  }
  const std::size_t data = reader.offset() + 1;
  const auto count = static_cast<std::size_t>(rows * cols);
  if (bytes.size() - data < count) {
    HeaderReader::fail(bytes.size(), "truncated payload (expected " +
                                         std::to_string(count) + " bytes from offset " +
                                         std::to_string(data) + ")");
  }
  const ImageGeometry geometry(rows, cols);
  Eigen::VectorXd values(geometry.size());
  // File order is row-major; model order is column-major.
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      values[c * rows + r] =
          bytes[data + static_cast<std::size_t>(r * cols + c)] / 255.0;
    }
  }
  return {std::move(values), geometry};
}

FaceVector load_pgm(const fs::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_pgm(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<unsigned char> encode_pgm(const FaceVector& image,
                                      PgmWriteStats* stats) {
  const Index rows = image.geometry.rows;
  const Index cols = image.geometry.cols;
  const std::string header =
      "P5\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  out.reserve(header.size() + static_cast<std::size_t>(rows * cols));
  std::size_t clamped = 0;
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      double v = image.values[c * rows + r];
      if (!(v >= 0.0 && v <= 1.0)) {
        ++clamped;
        v = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
      }
      out.push_back(static_cast<unsigned char>(std::lround(v * 255.0)));
    }
  }
  if (stats) stats->clamped = clamped;
  return out;
}

PgmWriteStats save_pgm(const FaceVector& image, const fs::path& path) {
  PgmWriteStats stats;
  const auto bytes = encode_pgm(image, &stats);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
  return stats;
}

FaceVector resize_nearest(const FaceVector& image, const ImageGeometry& target) {
  const ImageGeometry checked(target.rows, target.cols);
  const Index sr = image.geometry.rows;
  const Index sc = image.geometry.cols;
  Eigen::VectorXd out(checked.size());
  for (Index c = 0; c < checked.cols; ++c) {
    const Index src_c = (2 * c + 1) * sc / (2 * checked.cols);
    for (Index r = 0; r < checked.rows; ++r) {
      const Index src_r = (2 * r + 1) * sr / (2 * checked.rows);
      out[c * checked.rows + r] = image.values[src_c * sr + src_r];
    }
  }
  return {std::move(out), checked};
}

PgmWriteStats export_weight_map(const Eigen::Ref<const WeightVector>& w,
                                const ImageGeometry& geometry,
                                const fs::path& path) {
  return save_pgm(FaceVector(w, geometry), path);
}

DatasetManifest parse_manifest(std::istream& in, const fs::path& base_dir) {
  DatasetManifest manifest;
  manifest.base_dir = base_dir;
  std::set<std::string> seen_paths;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    auto fail = [&](const std::string& msg) {
      throw ParseError("manifest line " + std::to_string(line_no) + ": " + msg);
    };
    const auto c1 = text.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : text.find(',', c1 + 1);
    if (c2 == std::string::npos) fail("expected <split>,<label>,<path>");
    ManifestRecord rec;
    const std::string split = trim(text.substr(0, c1));
    if (split == "train") {
      rec.split = Split::train;
    } else if (split == "test") {
      rec.split = Split::test;
    } else {
      fail("unknown split '" + split + "'");
    }
    rec.label = trim(text.substr(c1 + 1, c2 - c1 - 1));
    const std::string path = trim(text.substr(c2 + 1));
    if (rec.label.empty()) fail("empty label");
    if (path.empty()) fail("empty path");
    if (!seen_paths.insert(path).second) fail("duplicate path '" + path + "'");
    rec.path = path;
    rec.line = line_no;
    manifest.records.push_back(std::move(rec));
  }

  std::set<std::string> labels;
  std::set<std::string> train_labels;
  for (const auto& r : manifest.records) {
    labels.insert(r.label);
    if (r.split == Split::train) train_labels.insert(r.label);
  }
  for (const auto& r : manifest.records) {
    if (r.split == Split::test && !train_labels.count(r.label)) {
      throw ParseError("manifest line " + std::to_string(r.line) + ": label '" +
                       r.label + "' has no training images");
    }
  }
  // Test-only labels are impossible after the check above, so ids are dense
  // over the training classes.
  manifest.class_names.assign(train_labels.begin(), train_labels.end());
  std::map<std::string, int> ids;
  for (std::size_t i = 0; i < manifest.class_names.size(); ++i) {
    ids[manifest.class_names[i]] = static_cast<int>(i);
  }
  for (auto& r : manifest.records) r.class_id = ids.at(r.label);
  return manifest;
}

DatasetManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  DatasetManifest manifest = parse_manifest(in, path.parent_path());
  std::vector<std::string> missing;
  std::size_t missing_total = 0;
  for (const auto& r : manifest.records) {
    if (!fs::exists(manifest.resolve(r))) {
      if (missing.size() < 10) missing.push_back(manifest.resolve(r).string());
      ++missing_total;
    }
  }
  if (missing_total > 0) {
    std::ostringstream msg;
    msg << missing_total << " manifest file(s) missing:";
    for (const auto& m : missing) msg << "\n  " << m;
    throw IoError(msg.str());
  }
  return manifest;
}

Dataset load_dataset(const DatasetManifest& manifest) {
  Dataset ds;
  ds.class_names = manifest.class_names;
  bool have_geometry = manifest.geometry.has_value();
  if (have_geometry) ds.geometry = *manifest.geometry;
  for (const auto& r : manifest.records) {
    FaceVector img = load_pgm(manifest.resolve(r));
    if (!have_geometry) {
      ds.geometry = img.geometry;
      have_geometry = true;
    }
    if (!(img.geometry == ds.geometry)) {
      if (!manifest.geometry) {
        throw InvalidGeometry(manifest.resolve(r).string() +
                              ": geometry differs from the first image; "
                              "set a resize target");
      }
      img = resize_nearest(img, ds.geometry);
    }
    if (r.split == Split::train) {
      ds.train.push_back(std::move(img));
      ds.train_labels.push_back(r.class_id);
    } else {
      ds.test.push_back(std::move(img));
      ds.test_labels.push_back(r.class_id);
      ds.test_ids.push_back(r.path.stem().string());
    }
  }
  return ds;
}

void write_dataset(const Dataset& dataset, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream manifest(dir / "manifest.csv");
  if (!manifest) throw IoError("cannot write " + (dir / "manifest.csv").string());
  manifest << "# split,label,path\n";
  auto label_of = [&](int id) {
    return id < static_cast<int>(dataset.class_names.size())
               ? dataset.class_names[static_cast<std::size_t>(id)]
               : std::to_string(id);
  };
  for (std::size_t i = 0; i < dataset.train.size(); ++i) {
    const std::string name = "train_" + std::to_string(i) + ".pgm";
    save_pgm(dataset.train[i], dir / name);
    manifest << "train," << label_of(dataset.train_labels[i]) << "," << name << "\n";
  }
  for (std::size_t i = 0; i < dataset.test.size(); ++i) {
    const std::string name =
        (i < dataset.test_ids.size() ? dataset.test_ids[i]
                                     : "test_" + std::to_string(i)) + ".pgm";
    save_pgm(dataset.test[i], dir / name);
    manifest << "test," << label_of(dataset.test_labels[i]) << "," << name << "\n";
  }
}

}  // namespace robustface
