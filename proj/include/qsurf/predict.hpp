#pragma once

#include "qsurf/model.hpp"

#include <vector>

namespace qsurf {

struct Prediction {
    int label = 1;
    double score1 = 0.0;  // twin: |f₁(x)| / ‖∇f₁(x)‖²; svm: wᵀx + b
    double score2 = 0.0;
    bool tie = false;
};

inline constexpr double kTieTolerance = 1e-12;

/// argmin_k |f_k(x)| / ‖∇f_k(x)‖². Scores within 1e−12 go to +1 with the tie
/// flag set; a zero gradient gives +∞; both zero throws std::domain_error.
Prediction decide_twin(double score1, double score2);

Prediction predict_twin_linear(const TwinModel& m, const Vector& x);
Prediction predict_twin_quadratic(const TwinModel& m, const Vector& x);
/// sign(wᵀx + b), 0 → +1 with the tie flag.
Prediction predict_svm(const SvmModel& m, const Vector& x);

/// Applies the model's scaler (if any) to the raw point first.
Prediction predict(const Model& m, const Vector& raw);
std::vector<Prediction> predict_batch(const Model& m, const Matrix& raw_points);
std::vector<int> predict_labels(const Model& m, const Matrix& raw_points);

/// Batch prediction on already-scaled points.
std::vector<int> predict_labels_scaled(const TwinModel& m, const Matrix& points);

}  // namespace qsurf
