#include "robustface/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "robustface/errors.hpp"

namespace robustface {

ImageGeometry::ImageGeometry(Index rows, Index cols) : rows(rows), cols(cols) {
  if (rows < 1 || cols < 1) {
    throw InvalidGeometry("image geometry must be positive, got " +
                          std::to_string(rows) + "x" + std::to_string(cols));
  }
}

FaceVector::FaceVector(Eigen::VectorXd values, ImageGeometry geometry)
    : values(std::move(values)), geometry(geometry) {
  if (this->values.size() != geometry.size()) {
    throw InvalidGeometry("vector of length " +
                          std::to_string(this->values.size()) +
                          " does not match geometry " +
                          std::to_string(geometry.rows) + "x" +
                          std::to_string(geometry.cols));
  }
}

Eigen::MatrixXd matricize(const Eigen::Ref<const Eigen::VectorXd>& v,
                          const ImageGeometry& geometry) {
  if (geometry.rows < 1 || geometry.cols < 1 || v.size() != geometry.size()) {
    throw InvalidGeometry("cannot reshape vector of length " +
                          std::to_string(v.size()) + " to " +
                          std::to_string(geometry.rows) + "x" +
                          std::to_string(geometry.cols));
  }
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), geometry.rows,
                                           geometry.cols);
}

Eigen::MatrixXd matricize(const FaceVector& v) {
  return matricize(v.values, v.geometry);
}

FaceVector vectorize(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  const ImageGeometry geometry(m.rows(), m.cols());
  Eigen::VectorXd values(geometry.size());
  Eigen::Map<Eigen::MatrixXd>(values.data(), m.rows(), m.cols()) = m;
  return {std::move(values), geometry};
}

Eigen::VectorXd normalize_unit_l2(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DegenerateInput("cannot normalize a vector with norm " +
                          std::to_string(norm));
  }
  return v / norm;
}

const ClassRange& Dictionary::class_range(int label) const {
  if (label < 0 || label >= num_classes()) {
    throw DegenerateInput("class id " + std::to_string(label) +
                          " out of range [0, " + std::to_string(num_classes()) +
                          ")");
  }
  return ranges_[static_cast<std::size_t>(label)];
}

Dictionary build_dictionary(std::span<const FaceVector> images,
                            std::span<const int> labels,
                            std::span<const FaceVector> variation) {
  if (images.empty()) throw DegenerateInput("dictionary needs at least one image");
  if (labels.size() != images.size()) {
    throw InvalidGeometry("got " + std::to_string(labels.size()) +
                          " labels for " + std::to_string(images.size()) +
                          " images");
  }
  const ImageGeometry geometry = images.front().geometry;
  auto check_geometry = [&](const FaceVector& img) {
    if (!(img.geometry == geometry) || img.size() != geometry.size()) {
      throw InvalidGeometry("all dictionary images must share one geometry");
    }
  };
  std::for_each(images.begin(), images.end(), check_geometry);
  std::for_each(variation.begin(), variation.end(), check_geometry);

  const int max_label = *std::max_element(labels.begin(), labels.end());
  if (*std::min_element(labels.begin(), labels.end()) < 0) {
    throw DegenerateInput("class ids must be nonnegative");
  }
  const auto num_classes = static_cast<std::size_t>(max_label) + 1;
  std::vector<Index> counts(num_classes, 0);
  for (int l : labels) ++counts[static_cast<std::size_t>(l)];
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (counts[c] == 0) {
      throw DegenerateInput("class ids must be dense; id " + std::to_string(c) +
                            " has no images");
    }
  }

  std::vector<std::size_t> order(images.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return labels[a] < labels[b];
  });

  const auto n_class = static_cast<Index>(images.size());
  const auto n_total = n_class + static_cast<Index>(variation.size());
  Dictionary dict;
  dict.geometry_ = geometry;
  dict.columns_.resize(geometry.size(), n_total);
  dict.labels_.resize(static_cast<std::size_t>(n_total), Dictionary::kVariationLabel);
  for (Index col = 0; col < n_class; ++col) {
    const std::size_t src = order[static_cast<std::size_t>(col)];
    dict.columns_.col(col) = normalize_unit_l2(images[src].values);
    dict.labels_[static_cast<std::size_t>(col)] = labels[src];
  }
  for (Index col = n_class; col < n_total; ++col) {
    dict.columns_.col(col) =
        normalize_unit_l2(variation[static_cast<std::size_t>(col - n_class)].values);
  }

  dict.ranges_.resize(num_classes);
  Index begin = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    dict.ranges_[c] = {begin, begin + counts[c]};
    begin += counts[c];
  }
  dict.variation_begin_ = n_class;
  return dict;
}

}  // namespace robustface
