#pragma once

#include "qsurf/embed.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qsurf {

/// m points (rows) in ℝⁿ with labels in {+1, −1}. +1 is the minority class
/// unless the caller chose otherwise at load time.
struct LabeledDataset {
    Matrix points;
    std::vector<int> labels;
    std::string name;
    // Raw label values, kept so write_csv reproduces the source file.
    std::string positive_name = "1";
    std::string negative_name = "-1";

    Eigen::Index size() const { return points.rows(); }
    Eigen::Index dim() const { return points.cols(); }

    std::vector<std::size_t> indices_of(int label) const;
    std::size_t count(int label) const;

    /// Rows of class +1 (A) / class −1 (B).
    Matrix positives() const;
    Matrix negatives() const;

    LabeledDataset subset(const std::vector<std::size_t>& rows) const;

    /// Throws std::invalid_argument unless labels are ±1, sizes agree and m >= 2.
    void validate() const;
    /// validate() plus both classes non-empty.
    void validate_for_training() const;
};

Matrix select_rows(const Matrix& m, const std::vector<std::size_t>& rows);

using LabelColumn = std::variant<std::string, std::size_t>;

struct CsvOptions {
    /// Defaults to the last column.
    std::optional<LabelColumn> label_column;
    /// Raw label value mapped to +1. Defaults to the minority class.
    std::optional<std::string> positive_label;
};

/// Errors (std::runtime_error): missing file, non-numeric cell (with 1-based
/// row/column), fewer or more than two classes, unknown positive label.
LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& opts = {});

/// Header x1..xn,label; 17 significant digits.
void write_csv(const LabeledDataset& ds, const std::filesystem::path& path);
void write_points_csv(const Matrix& points, const std::filesystem::path& path,
                      const std::string& prefix = "x");

/// Reads a numeric CSV without labels (header optional).
Matrix load_points_csv(const std::filesystem::path& path);

struct FoldPlan {
    int k = 0;
    std::vector<int> assignment;  // fold of each row, in [0, k)
    std::uint64_t seed = 0;

    std::vector<std::size_t> train_rows(int fold) const;
    std::vector<std::size_t> test_rows(int fold) const;
};

/// Per-class fold counts differ by at most one; fold totals also differ by at most one.
FoldPlan stratified_kfold(const LabeledDataset& ds, int k, std::uint64_t seed);

struct ScalerState {
    Vector min;
    Vector max;

    Vector apply(const Vector& x) const;
};

inline constexpr double kScaledLow = -0.5;
inline constexpr double kScaledHigh = 1.5;

ScalerState fit_scaler(const LabeledDataset& train);
/// (x − min)/(max − min) per feature, constant features → 0, clipped to [−0.5, 1.5].
LabeledDataset apply_scaler(const ScalerState& s, const LabeledDataset& ds);
Matrix apply_scaler(const ScalerState& s, const Matrix& points);

enum class ArtiPattern { arti1, arti2 };

ArtiPattern parse_pattern(const std::string& name);

/// arti1: minority inside an ellipse, majority on a surrounding elliptical ring.
/// arti2: minority above and majority below the parabola x2 = ½x1², with a gap.
/// Majority count = imbalance_rate · n_minority; Gaussian noise of std `noise`
/// is added to both coordinates. Minority rows come first.
LabeledDataset gen_artificial(ArtiPattern pattern, int n_minority, int imbalance_rate, double noise,
                              std::uint64_t seed);

}  // namespace qsurf
