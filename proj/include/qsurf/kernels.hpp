#pragma once

// Data-parallel kernels shared by every trainer.
//
// The OpenMP versions split work into fixed-size chunks and combine partial
// results in chunk order, so output never depends on the thread count.
// `qsurf::serial` holds straightforward loop references used by the tests and
// by bench/ for comparison.

#include "qsurf/embed.hpp"

#include <span>
#include <vector>

namespace qsurf {

enum class FeatureMap { linear, quadratic };

/// Feature length of one mapped point (without the trailing constant 1).
Eigen::Index feature_size(FeatureMap map, Eigen::Index n);

/// Sufficient statistics of a point set under a feature map:
///   gram = S Sᵀ, sum = S e, count = |set|,
/// where S holds the mapped points as columns.
struct SetStats {
    Matrix gram;
    Vector sum;
    Eigen::Index count = 0;

    static SetStats empty(Eigen::Index d) { return {Matrix::Zero(d, d), Vector::Zero(d), 0}; }
};

/// Mapped points as columns (d × m). Rows of `points` are the input points.
Matrix map_points(const Matrix& points, FeatureMap map);

SetStats set_stats(const Matrix& points, FeatureMap map);

/// Twin-model scores |f_k(x)| / ‖∇f_k(x)‖² for k = 1, 2, one row per point.
/// Zero gradient norms give +inf.
Matrix twin_scores(const QuadraticSurface& s1, const QuadraticSurface& s2, const Matrix& points);

namespace serial {
Matrix map_points(const Matrix& points, FeatureMap map);
SetStats set_stats(const Matrix& points, FeatureMap map);
Matrix twin_scores(const QuadraticSurface& s1, const QuadraticSurface& s2, const Matrix& points);
}  // namespace serial

/// Upper bound on OpenMP threads used by the library (QSURF_THREADS when set).
int max_threads();
void set_max_threads(int n);

}  // namespace qsurf
