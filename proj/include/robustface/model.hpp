#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace robustface {

using Index = Eigen::Index;

// Pixel grid of an image: `rows` x `cols`, vectorized length rows * cols.
struct ImageGeometry {
  Index rows = 0;
  Index cols = 0;

  ImageGeometry() = default;
  // Throws InvalidGeometry unless both sides are positive.
  ImageGeometry(Index rows, Index cols);

  Index size() const { return rows * cols; }
  bool operator==(const ImageGeometry&) const = default;
};

// A grayscale image vectorized column by column.
struct FaceVector {
  Eigen::VectorXd values;
  ImageGeometry geometry;

  FaceVector() = default;
  // Throws InvalidGeometry if values.size() != geometry.size().
  FaceVector(Eigen::VectorXd values, ImageGeometry geometry);

  Index size() const { return values.size(); }
};

// Column-major reshape of a length-(rows*cols) vector into a rows x cols
// matrix. Throws InvalidGeometry on a length mismatch.
Eigen::MatrixXd matricize(const Eigen::Ref<const Eigen::VectorXd>& v,
                          const ImageGeometry& geometry);
Eigen::MatrixXd matricize(const FaceVector& v);

// Column-major flatten; exact inverse of matricize.
FaceVector vectorize(const Eigen::Ref<const Eigen::MatrixXd>& m);

// Throws DegenerateInput for a zero (or non-finite norm) vector.
Eigen::VectorXd normalize_unit_l2(const Eigen::Ref<const Eigen::VectorXd>& v);

struct ClassRange {
  Index begin = 0;
  Index end = 0;  // exclusive
  Index size() const { return end - begin; }
};

// Training matrix with unit-norm columns grouped contiguously by class.
//
// Class-specific columns come first (class 0, then class 1, ...). In extended
// mode a block of shared intra-class variation columns follows them; those
// columns carry the label kVariationLabel and belong to no class.
class Dictionary {
 public:
  static constexpr int kVariationLabel = -1;

  Dictionary() = default;

  const Eigen::MatrixXd& columns() const { return columns_; }
  const std::vector<int>& labels() const { return labels_; }
  const ImageGeometry& geometry() const { return geometry_; }

  Index dimension() const { return columns_.rows(); }
  Index num_columns() const { return columns_.cols(); }
  int num_classes() const { return static_cast<int>(ranges_.size()); }
  const ClassRange& class_range(int label) const;
  // Number of class-specific columns (n in the plain model).
  Index num_class_columns() const { return variation_begin_; }

  bool has_variation() const { return variation_begin_ < num_columns(); }
  ClassRange variation_range() const { return {variation_begin_, num_columns()}; }
  bool is_variation_column(Index col) const { return col >= variation_begin_; }

  // Columns of one class; a view into columns().
  auto class_block(int label) const {
    const ClassRange& r = class_range(label);
    return columns_.middleCols(r.begin, r.size());
  }

 private:
  friend Dictionary build_dictionary(std::span<const FaceVector>,
                                     std::span<const int>,
                                     std::span<const FaceVector>);

  Eigen::MatrixXd columns_;
  std::vector<int> labels_;
  std::vector<ClassRange> ranges_;
  ImageGeometry geometry_;
  Index variation_begin_ = 0;
};

// Builds a dictionary from training images. Labels must be dense class ids
// 0..c-1 with every id present. Columns are normalized to unit l2 norm and
// stably grouped by class. `variation` (optional) supplies the shared
// variation block B of the extended model T' = [A B].
//
// Throws DegenerateInput for empty input or a zero image and InvalidGeometry
// for mixed geometry or mismatched label count.
Dictionary build_dictionary(std::span<const FaceVector> images,
                            std::span<const int> labels,
                            std::span<const FaceVector> variation = {});

}  // namespace robustface
