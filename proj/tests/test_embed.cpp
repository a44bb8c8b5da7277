#include "oracles.hpp"
#include "qsurf/embed.hpp"

#include <doctest.h>

using namespace qsurf;

TEST_SUITE("embed") {

TEST_CASE("hvec of small matrices") {
    CHECK(hvec(SymmetricMatrix::from_full(Matrix::Constant(1, 1, 5.0))) == Vector::Constant(1, 5.0));
    const Vector h = hvec(SymmetricMatrix::from_full(Matrix::Identity(2, 2)));
    CHECK(h == (Vector(3) << 1, 0, 1).finished());
}

TEST_CASE("hvec order is column-major lower") {
    Matrix A(3, 3);
    A << 1, 2, 3, 2, 4, 5, 3, 5, 6;
    CHECK(hvec(SymmetricMatrix::from_full(A)) == oracle::hvec(A));
    CHECK(hvec_index(3, 2, 1) == 4);
}

TEST_CASE("duplication and elimination match explicit construction") {
    for (int n = 1; n <= 10; ++n) {
        const Matrix D(duplication_matrix(n));
        const Matrix L(elimination_matrix(n));
        CHECK(D == oracle::duplication(n));
        CHECK(L == oracle::elimination(n));
        CHECK(L * D == Matrix::Identity(hvec_size(n), hvec_size(n)));
    }
    Matrix D2(duplication_matrix(2));
    CHECK(D2 * Vector::LinSpaced(3, 1, 3) == (Vector(4) << 1, 2, 2, 3).finished());
}

TEST_CASE("rank of L5 by row reduction") {
    CHECK(oracle::rank(Matrix(elimination_matrix(5))) == 15);
}

TEST_CASE("D hvec(A) = vec(A) for random symmetric A") {
    Rng rng(11, "test-embed");
    for (int n = 1; n <= 6; ++n)
        for (int t = 0; t < 20; ++t) {
            const Matrix A = oracle::random_symmetric(rng, n);
            const Vector h = hvec(SymmetricMatrix::from_full(A));
            CHECK((Matrix(duplication_matrix(n)) * h - oracle::vec(A)).cwiseAbs().maxCoeff() == 0.0);
            CHECK(vec(A) == oracle::vec(A));
        }
}

TEST_CASE("from_full rejects asymmetric input") {
    Matrix A(2, 2);
    A << 1, 2, 3, 4;
    CHECK_THROWS_AS(SymmetricMatrix::from_full(A), std::invalid_argument);
}

TEST_CASE("embed_point") {
    CHECK(embed_point(Vector::Zero(3)) == Vector::Zero(9));
    CHECK(embed_point(Vector::Constant(1, 2.0)) == Vector::Constant(2, 2.0));
    // Off-diagonal slot carries x1·x2 (not ½x1·x2) so that hvec(W)ᵀq(x) = ½xᵀWx.
    CHECK(embed_point(Vector::Ones(2)) == (Vector(5) << 0.5, 1, 0.5, 1, 1).finished());
    Rng rng(3, "test-embed-point");
    for (int n = 1; n <= 5; ++n) {
        const Vector x = oracle::random_matrix(rng, n, 1).col(0);
        CHECK((embed_point(x) - oracle::embed(x)).norm() <= 1e-15 * (1 + x.squaredNorm()));
    }
    Vector bad(2);
    bad << 1, std::nan("");
    CHECK_THROWS_AS(embed_point(bad), std::invalid_argument);
}

TEST_CASE("eval_surface") {
    QuadraticSurface s{SymmetricMatrix(2), Vector::Zero(2), 3.0};
    CHECK(eval_surface(s, Vector::Random(2)) == 3.0);
    s = QuadraticSurface{SymmetricMatrix::from_full(2 * Matrix::Identity(2, 2)), Vector::Zero(2), 0.0};
    CHECK(eval_surface(s, Vector::Ones(2)) == doctest::Approx(2.0));
    CHECK_THROWS_AS(eval_surface(s, Vector::Ones(3)), std::invalid_argument);
}

TEST_CASE("eval via (W,b,c) equals eval via embedding") {
    Rng rng(5, "test-embed-eval");
    for (int n = 1; n <= 6; ++n)
        for (int t = 0; t < 10; ++t) {
            const Matrix W = oracle::random_symmetric(rng, n);
            const Vector b = oracle::random_matrix(rng, n, 1).col(0);
            const Vector x = oracle::random_matrix(rng, n, 1, -3, 3).col(0);
            const QuadraticSurface s{SymmetricMatrix::from_full(W), b, 0.7};
            const double direct = 0.5 * x.dot(W * x) + b.dot(x) + 0.7;
            const double via_z = s.flatten().dot(oracle::embed(x)) + 0.7;
            CHECK(eval_surface(s, x) == doctest::Approx(direct).epsilon(1e-12));
            CHECK(via_z == doctest::Approx(direct).epsilon(1e-12));
        }
}

TEST_CASE("gradient norm") {
    QuadraticSurface s{SymmetricMatrix(2), (Vector(2) << 3, 4).finished(), 0.0};
    CHECK(surface_gradient_sqnorm(s, Vector::Random(2)) == doctest::Approx(25.0));
    s = QuadraticSurface{SymmetricMatrix::from_full(Matrix::Identity(2, 2)), Vector::Zero(2), 0.0};
    CHECK(surface_gradient_sqnorm(s, (Vector(2) << 1, 0).finished()) == doctest::Approx(1.0));

    // ‖H(x)z‖² with H(x) = [M(x) I], M(x) built as X·D_n from X = I ⊗ xᵀ.
    Rng rng(8, "test-embed-grad");
    for (int n = 1; n <= 5; ++n) {
        const Matrix W = oracle::random_symmetric(rng, n);
        const Vector b = oracle::random_matrix(rng, n, 1).col(0);
        const Vector x = oracle::random_matrix(rng, n, 1).col(0);
        Matrix X = Matrix::Zero(n, n * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) X(i, i + j * n) = x(j);
        Matrix H(n, hvec_size(n) + n);
        H << X * oracle::duplication(n), Matrix::Identity(n, n);
        const QuadraticSurface s{SymmetricMatrix::from_full(W), b, 0.0};
        CHECK(surface_gradient_sqnorm(s, x) == doctest::Approx((H * s.flatten()).squaredNorm()).epsilon(1e-12));
    }
}

TEST_CASE("sum of squared gradients is a quadratic form in z") {
    // Σ‖Wxᵢ + b‖² = zᵀ(Σ HᵢᵀHᵢ)z; the ½zᵀGz convention uses G = 2ΣHᵢᵀHᵢ.
    Rng rng(9, "test-embed-G");
    for (int n = 1; n <= 5; ++n) {
        const int m = 1 + static_cast<int>(rng.below(20));
        const Matrix P = oracle::random_matrix(rng, m, n);
        const QuadraticSurface s{SymmetricMatrix::from_full(oracle::random_symmetric(rng, n)),
                                 oracle::random_matrix(rng, n, 1).col(0), 0.0};
        Matrix G = Matrix::Zero(hvec_size(n) + n, hvec_size(n) + n);
        double lhs = 0.0;
        for (int i = 0; i < m; ++i) {
            const Vector x = P.row(i).transpose();
            Matrix X = Matrix::Zero(n, n * n);
            for (int a = 0; a < n; ++a)
                for (int c = 0; c < n; ++c) X(a, a + c * n) = x(c);
            Matrix H(n, hvec_size(n) + n);
            H << X * oracle::duplication(n), Matrix::Identity(n, n);
            G += 2.0 * H.transpose() * H;
            lhs += surface_gradient_sqnorm(s, x);
        }
        const Vector z = s.flatten();
        CHECK(lhs == doctest::Approx(0.5 * z.dot(G * z)).epsilon(1e-10));
    }
}

TEST_CASE("flatten / unflatten round trip") {
    Rng rng(4, "test-embed-flat");
    const Matrix W = oracle::random_symmetric(rng, 4);
    const QuadraticSurface s{SymmetricMatrix::from_full(W), Vector::LinSpaced(4, 1, 4), -2.0};
    const QuadraticSurface t = QuadraticSurface::unflatten(s.flatten(), s.c, 4);
    CHECK(t.W.full() == W);
    CHECK(t.b == s.b);
    CHECK(selector_apply(s.flatten(), 4) == oracle::hvec(W));
    CHECK(selector_gram_diagonal(2) == (Vector(5) << 1, 1, 1, 0, 0).finished());
}

}  // TEST_SUITE
