#include "qsurf/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qsurf {
namespace {

constexpr Eigen::Index kChunk = 64;

void map_one(const double* x, Eigen::Index n, FeatureMap map, double* out) {
    if (map == FeatureMap::quadratic) {
        embed_point_into(x, n, out);
    } else {
        std::copy(x, x + n, out);
    }
}

double twin_score(const QuadraticSurface& s, const Vector& x) {
    const double num = std::abs(eval_surface(s, x));
    const double den = surface_gradient_sqnorm(s, x);
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

}  // namespace

Eigen::Index feature_size(FeatureMap map, Eigen::Index n) {
    return map == FeatureMap::quadratic ? embed_size(n) : n;
}

Matrix map_points(const Matrix& points, FeatureMap map) {
    const Eigen::Index m = points.rows(), n = points.cols();
    const Eigen::Index d = feature_size(map, n);
    Matrix s(d, m);
    // Row-major access into a column-major matrix; copy each row first.
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (Eigen::Index i = 0; i < m; ++i) {
        Vector x = points.row(i).transpose();
        map_one(x.data(), n, map, s.col(i).data());
    }
    return s;
}

SetStats set_stats(const Matrix& points, FeatureMap map) {
    const Eigen::Index m = points.rows();
    const Eigen::Index d = feature_size(map, points.cols());
    if (m == 0) return SetStats::empty(d);
    const Matrix s = map_points(points, map);
    const Eigen::Index chunks = (m + kChunk - 1) / kChunk;
    std::vector<Matrix> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (Eigen::Index c = 0; c < chunks; ++c) {
        const Eigen::Index lo = c * kChunk, len = std::min(kChunk, m - lo);
        Matrix g = Matrix::Zero(d, d);
        g.selfadjointView<Eigen::Lower>().rankUpdate(s.middleCols(lo, len));
        partial[static_cast<std::size_t>(c)] = std::move(g);
    }
    SetStats out = SetStats::empty(d);
    for (const auto& g : partial) out.gram += g;
    out.gram = out.gram.selfadjointView<Eigen::Lower>();
    out.sum = s.rowwise().sum();
    out.count = m;
    return out;
}

Matrix twin_scores(const QuadraticSurface& s1, const QuadraticSurface& s2, const Matrix& points) {
    const Eigen::Index m = points.rows();
    Matrix out(m, 2);
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (Eigen::Index i = 0; i < m; ++i) {
        const Vector x = points.row(i).transpose();
        out(i, 0) = twin_score(s1, x);
        out(i, 1) = twin_score(s2, x);
    }
    return out;
}

namespace serial {

Matrix map_points(const Matrix& points, FeatureMap map) {
    const Eigen::Index m = points.rows(), n = points.cols();
    Matrix s(feature_size(map, n), m);
    for (Eigen::Index i = 0; i < m; ++i) {
        Vector x = points.row(i).transpose();
        map_one(x.data(), n, map, s.col(i).data());
    }
    return s;
}

SetStats set_stats(const Matrix& points, FeatureMap map) {
    const Matrix s = serial::map_points(points, map);
    const Eigen::Index d = s.rows(), m = s.cols();
    SetStats out = SetStats::empty(d);
    for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index j = 0; j < d; ++j) {
            out.sum(j) += s(j, k);
            for (Eigen::Index i = 0; i < d; ++i) out.gram(i, j) += s(i, k) * s(j, k);
        }
    }
    out.count = m;
    return out;
}

Matrix twin_scores(const QuadraticSurface& s1, const QuadraticSurface& s2, const Matrix& points) {
    Matrix out(points.rows(), 2);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const Vector x = points.row(i).transpose();
        out(i, 0) = twin_score(s1, x);
        out(i, 1) = twin_score(s2, x);
    }
    return out;
}

}  // namespace serial

namespace {
int g_max_threads = 0;
}

int max_threads() {
    return g_max_threads > 0 ? g_max_threads : omp_get_max_threads();
}

void set_max_threads(int n) {
    if (n < 0) throw std::invalid_argument("set_max_threads: negative thread count");
    g_max_threads = n;
}

}  // namespace qsurf
