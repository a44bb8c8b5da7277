#include "oracles.hpp"
#include "qsurf/closed_form.hpp"
#include "qsurf/predict.hpp"

#include <doctest.h>

using namespace qsurf;

namespace {

TwinModel linear_model(double w1, double b1, double w2, double b2) {
    TwinModel m;
    m.kind = SurfaceKind::linear;
    m.s1 = QuadraticSurface::affine(Vector::Constant(1, w1), b1);
    m.s2 = QuadraticSurface::affine(Vector::Constant(1, w2), b2);
    return m;
}

Vector v1(double x) { return Vector::Constant(1, x); }

}  // namespace

TEST_SUITE("predict-classify") {

TEST_CASE("linear twin rule") {
    const TwinModel m = linear_model(1, 0, 1, -2);
    const Prediction p = predict_twin_linear(m, v1(0.5));
    CHECK(p.label == 1);
    CHECK(p.score1 == doctest::Approx(0.5));
    CHECK(p.score2 == doctest::Approx(1.5));
    CHECK(predict_twin_linear(m, v1(0.0)).label == 1);
    CHECK(predict_twin_linear(m, v1(1.9)).label == -1);
    // Equidistant point: tie resolved to +1.
    const Prediction t = predict_twin_linear(m, v1(1.0));
    CHECK(t.label == 1);
    CHECK(t.tie);
}

TEST_CASE("scaling both classes by a common factor keeps the labels") {
    Rng rng(51, "test-predict-scale");
    for (int k = 0; k < 100; ++k) {
        const double w1 = rng.uniform(-2, 2), b1 = rng.uniform(-2, 2), w2 = rng.uniform(-2, 2), b2 = rng.uniform(-2, 2);
        const double t = rng.uniform(0.1, 10), x = rng.uniform(-3, 3);
        CHECK(predict_twin_linear(linear_model(w1, b1, w2, b2), v1(x)).label ==
              predict_twin_linear(linear_model(t * w1, t * b1, t * w2, t * b2), v1(x)).label);
    }
}

TEST_CASE("degenerate gradients") {
    CHECK(predict_twin_linear(linear_model(0, 1, 1, 0), v1(3)).label == -1);
    CHECK(predict_twin_linear(linear_model(1, 0, 0, 1), v1(3)).label == 1);
    CHECK_THROWS_AS(predict_twin_linear(linear_model(0, 1, 0, 1), v1(3)), std::domain_error);
    CHECK_THROWS_AS(decide_twin(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()),
                    std::domain_error);
}

TEST_CASE("quadratic twin rule") {
    TwinModel m;
    m.kind = SurfaceKind::quadratic;
    // f(x) = ½x² − 1 vanishes at ±√2.
    m.s1 = QuadraticSurface::unflatten((Vector(2) << 1, 0).finished(), -1, 1);
    m.s2 = QuadraticSurface::unflatten((Vector(2) << 1, 0).finished(), 1, 1);
    CHECK(predict_twin_quadratic(m, v1(std::sqrt(2.0))).label == 1);
    // eval₁ = 0.1, eval₂ = 2.1 (|−2.1| in magnitude terms): class +1.
    const double x = std::sqrt(2.2);
    const Prediction p = predict_twin_quadratic(m, v1(x));
    CHECK(eval_surface(m.s1, v1(x)) == doctest::Approx(0.1));
    CHECK(p.label == 1);
    CHECK(p.score1 < p.score2);
}

TEST_CASE("quadratic rule with W = 0 equals the linear rule") {
    Rng rng(52, "test-predict-flat");
    const Vector w1 = oracle::random_matrix(rng, 3, 1).col(0), w2 = oracle::random_matrix(rng, 3, 1).col(0);
    TwinModel lin;
    lin.kind = SurfaceKind::linear;
    lin.s1 = QuadraticSurface::affine(w1, 0.3);
    lin.s2 = QuadraticSurface::affine(w2, -0.4);
    TwinModel quad = lin;
    quad.kind = SurfaceKind::quadratic;
    for (int k = 0; k < 50; ++k) {
        const Vector x = oracle::random_matrix(rng, 3, 1, -3, 3).col(0);
        const Prediction a = predict_twin_linear(lin, x), b = predict_twin_quadratic(quad, x);
        CHECK(a.label == b.label);
        CHECK(a.score1 == doctest::Approx(b.score1));
        CHECK(a.score2 == doctest::Approx(b.score2));
    }
}

TEST_CASE("SVM rule") {
    SvmModel s;
    s.w = (Vector(2) << 1, 0).finished();
    s.b = 0;
    CHECK(predict_svm(s, (Vector(2) << 2, 5).finished()).label == 1);
    CHECK(predict_svm(s, (Vector(2) << -2, 5).finished()).label == -1);
    const Prediction z = predict_svm(s, (Vector(2) << 0, 5).finished());
    CHECK(z.label == 1);
    CHECK(z.tie);
    s.b = 2 * 2.5;
    CHECK(predict_svm(s, (Vector(2) << -2, 5).finished()).label == 1);
}

TEST_CASE("batch prediction equals pointwise prediction and is deterministic") {
    const LabeledDataset ds = gen_artificial(ArtiPattern::arti2, 30, 3, 0.1, 4);
    Model m;
    m.id = "ls-qtsvm";
    m.body = fit_ls_qtsvm(ds.positives(), ds.negatives(), ModelParams{});
    m.scaler = fit_scaler(ds);
    const auto batch = predict_batch(m, ds.points);
    for (Eigen::Index i = 0; i < ds.size(); ++i) {
        const Prediction p = predict(m, ds.points.row(i).transpose());
        CHECK(p.label == batch[static_cast<std::size_t>(i)].label);
        CHECK(p.score1 == batch[static_cast<std::size_t>(i)].score1);
        CHECK(p.score2 == batch[static_cast<std::size_t>(i)].score2);
    }
    const auto again = predict_labels(m, ds.points);
    CHECK(again == predict_labels(m, ds.points));
    CHECK_THROWS_AS(predict(m, Vector::Zero(5)), std::invalid_argument);
}

}  // TEST_SUITE
