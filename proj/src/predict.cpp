#include "qsurf/predict.hpp"

#include "qsurf/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qsurf {
namespace {

double twin_score(const QuadraticSurface& s, const Vector& x) {
    const double den = surface_gradient_sqnorm(s, x);
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(eval_surface(s, x)) / den;
}

}  // namespace

Prediction decide_twin(double s1, double s2) {
    if (std::isinf(s1) && std::isinf(s2))
        throw std::domain_error("both twin surfaces have zero gradient at the query point");
    Prediction p;
    p.score1 = s1;
    p.score2 = s2;
    if (std::abs(s1 - s2) <= kTieTolerance) {
        p.label = 1;
        p.tie = true;
    } else {
        p.label = s1 < s2 ? 1 : -1;
    }
    return p;
}

Prediction predict_twin_linear(const TwinModel& m, const Vector& x) {
    if (m.kind != SurfaceKind::linear) throw std::invalid_argument("predict_twin_linear: model is quadratic");
    return decide_twin(twin_score(m.s1, x), twin_score(m.s2, x));
}

Prediction predict_twin_quadratic(const TwinModel& m, const Vector& x) {
    if (m.kind != SurfaceKind::quadratic) throw std::invalid_argument("predict_twin_quadratic: model is linear");
    return decide_twin(twin_score(m.s1, x), twin_score(m.s2, x));
}

Prediction predict_svm(const SvmModel& m, const Vector& x) {
    if (x.size() != m.w.size()) throw std::invalid_argument("predict_svm: dimension mismatch");
    Prediction p;
    const double f = m.w.dot(x) + m.b;
    p.score1 = f;
    p.score2 = -f;
    p.tie = f == 0.0;
    p.label = f >= 0.0 ? 1 : -1;
    return p;
}

Prediction predict(const Model& m, const Vector& raw) {
    const Vector x = m.scaler ? m.scaler->apply(raw) : raw;
    if (m.is_svm()) return predict_svm(m.svm(), x);
    const auto& t = m.twin();
    return t.kind == SurfaceKind::linear ? predict_twin_linear(t, x) : predict_twin_quadratic(t, x);
}

std::vector<Prediction> predict_batch(const Model& m, const Matrix& raw) {
    if (raw.cols() != m.dim()) throw std::invalid_argument("predict: points have wrong dimension");
    const Matrix X = m.scaler ? apply_scaler(*m.scaler, raw) : raw;
    std::vector<Prediction> out(static_cast<std::size_t>(X.rows()));
    if (m.is_svm()) {
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            out[static_cast<std::size_t>(i)] = predict_svm(m.svm(), X.row(i).transpose());
        return out;
    }
    const Matrix scores = twin_scores(m.twin().s1, m.twin().s2, X);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        out[static_cast<std::size_t>(i)] = decide_twin(scores(i, 0), scores(i, 1));
    return out;
}

std::vector<int> predict_labels(const Model& m, const Matrix& raw) {
    std::vector<int> labels;
    for (const auto& p : predict_batch(m, raw)) labels.push_back(p.label);
    return labels;
}

std::vector<int> predict_labels_scaled(const TwinModel& m, const Matrix& X) {
    const Matrix scores = twin_scores(m.s1, m.s2, X);
    std::vector<int> labels(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) labels[static_cast<std::size_t>(i)] = decide_twin(scores(i, 0), scores(i, 1)).label;
    return labels;
}

}  // namespace qsurf
