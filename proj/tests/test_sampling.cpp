#include "qsurf/rng.hpp"
#include "qsurf/sampling.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <set>

using namespace qsurf;

namespace {

LabeledDataset make(const Matrix& pos, const Matrix& neg) {
    LabeledDataset ds;
    ds.points.resize(pos.rows() + neg.rows(), pos.cols());
    ds.points << pos, neg;
    ds.labels.assign(static_cast<std::size_t>(pos.rows()), 1);
    ds.labels.resize(static_cast<std::size_t>(ds.points.rows()), -1);
    return ds;
}

std::set<std::vector<double>> row_set(const Matrix& m) {
    std::set<std::vector<double>> s;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::vector<double> r(static_cast<std::size_t>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(j)] = m(i, j);
        s.insert(r);
    }
    return s;
}

}  // namespace

TEST_SUITE("sampling-universum") {

TEST_CASE("Universum midpoint of a single pair") {
    Matrix pos(1, 2), neg(1, 2);
    pos << 0, 0;
    neg << 2, 2;
    const Matrix U = gen_universum_avg(make(pos, neg), {1.0, 1}, 1);
    REQUIRE(U.rows() == 1);
    CHECK(U.row(0) == (Vector(2) << 1, 1).finished().transpose());
}

TEST_CASE("all pairs with fraction 1") {
    Matrix pos(2, 1), neg(2, 1);
    pos << 0, 10;
    neg << 100, 1000;
    const Matrix U = gen_universum_avg(make(pos, neg), {1.0, 4}, 5);
    REQUIRE(U.rows() == 4);
    std::multiset<double> got(U.data(), U.data() + 4);
    CHECK(got == std::multiset<double>{50, 500, 55, 505});
    // Cycling when more points are requested.
    const Matrix U8 = gen_universum_avg(make(pos, neg), {1.0, 8}, 5);
    CHECK(U8.topRows(4) == U8.bottomRows(4));
}

TEST_CASE("pool sizes follow the ceiling rule and every point is a parent midpoint") {
    const LabeledDataset h = load_csv(test_util::data_file("haberman.csv"));
    const Matrix U = gen_universum_avg(h, {0.1, std::nullopt}, 9);
    CHECK(U.rows() == 9 * 23);
    CHECK(gen_universum_avg(h, {0.1, std::nullopt}, 9) == U);

    // Continuous data so that every midpoint identifies its parents.
    Rng rng(9, "test-sampling-parents");
    Matrix pos(81, 3), neg(225, 3);
    for (Eigen::Index i = 0; i < pos.size(); ++i) pos(i) = rng.normal();
    for (Eigen::Index i = 0; i < neg.size(); ++i) neg(i) = rng.normal();
    const Matrix V = gen_universum_avg(make(pos, neg), {0.1, std::nullopt}, 9);
    const Matrix A = pos, B = neg;
    std::set<Eigen::Index> pos_used, neg_used;
    for (Eigen::Index k = 0; k < V.rows(); ++k) {
        bool found = false;
        for (Eigen::Index i = 0; i < A.rows() && !found; ++i)
            for (Eigen::Index j = 0; j < B.rows() && !found; ++j)
                if (((A.row(i) + B.row(j)) / 2 - V.row(k)).cwiseAbs().maxCoeff() == 0.0) {
                    found = true;
                    pos_used.insert(i);
                    neg_used.insert(j);
                }
        CHECK(found);
    }
    CHECK(V.rows() == 9 * 23);
    CHECK(pos_used.size() == 9);
    CHECK(neg_used.size() == 23);
}

TEST_CASE("undersampling") {
    const LabeledDataset h = load_csv(test_util::data_file("haberman.csv"));
    const UndersampledPair a = undersample_majority(h, 1), b = undersample_majority(h, 2);
    CHECK(a.B_tilde.rows() == 81);
    CHECK(a.A.rows() == 81);
    CHECK(a.majority_rows != b.majority_rows);
    CHECK(std::set<std::size_t>(a.majority_rows.begin(), a.majority_rows.end()).size() == 81);
    for (auto r : a.majority_rows) CHECK(h.labels[r] == -1);
    CHECK(undersample_majority(h, 1).majority_rows == a.majority_rows);

    Matrix pos(3, 1), neg(3, 1);
    pos << 1, 2, 3;
    neg << 4, 5, 6;
    const UndersampledPair eq = undersample_majority(make(pos, neg), 4);
    CHECK(row_set(eq.B_tilde) == row_set(neg));
}

TEST_CASE("budgets") {
    auto check = [](std::size_t n1, std::size_t n2, std::size_t r, std::size_t g) {
        const auto b = universum_budgets(n1, n2);
        CHECK(b.r == r);
        CHECK(b.g == g);
    };
    check(81, 225, 144, 41);
    check(5, 5, 0, 3);
    check(268, 500, 232, 134);
    CHECK_THROWS_AS(universum_budgets(10, 5), std::invalid_argument);
}

TEST_CASE("reduce_universum") {
    Matrix U(144, 1);
    for (int i = 0; i < 144; ++i) U(i) = i;
    const Matrix R = reduce_universum(U, 41, 3);
    CHECK(R.rows() == 41);
    CHECK(std::set<double>(R.data(), R.data() + 41).size() == 41);
    CHECK(reduce_universum(U, 0, 3).rows() == 0);
    const Matrix all = reduce_universum(U, 144, 3);
    CHECK(std::set<double>(all.data(), all.data() + 144).size() == 144);
    CHECK_THROWS_AS(reduce_universum(U, 145, 3), std::invalid_argument);
}

TEST_CASE("imbalance sample: budgets, clamp and the balanced case") {
    const LabeledDataset h = load_csv(test_util::data_file("haberman.csv"));
    const ImbalanceSample s = imbalance_sample(h, 5);
    CHECK(s.universum.r == 144);
    CHECK(s.universum.g == 41);
    CHECK(s.universum.U.rows() == 144);
    CHECK(s.universum.U_hat.rows() == 41);
    CHECK(s.universum.g <= h.count(1));
    CHECK(s.universum.r + h.count(1) == h.count(-1));
    CHECK(row_set(s.universum.U_hat).size() <= row_set(s.universum.U).size());
    for (const auto& r : row_set(s.universum.U_hat)) CHECK(row_set(s.universum.U).count(r) == 1);

    // |I2| < 1.5|I1|: g would exceed r and is clamped.
    Matrix pos = Matrix::Random(20, 2), neg = Matrix::Random(24, 2);
    const ImbalanceSample c = imbalance_sample(make(pos, neg), 5);
    CHECK(c.universum.r == 4);
    CHECK(c.universum.g_nominal == 10);
    CHECK(c.universum.g == 4);

    const ImbalanceSample bal = imbalance_sample(make(pos, Matrix::Random(20, 2)), 5);
    CHECK(bal.universum.r == 0);
    CHECK(bal.universum.U.rows() == 0);
    CHECK(bal.universum.U_hat.rows() == 0);
}

}  // TEST_SUITE
