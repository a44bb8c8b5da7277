#include "qsurf/hinge.hpp"

#include "qsurf/linsolve.hpp"

#include <limits>
#include <stdexcept>

namespace qsurf {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

QPOptions qp_options(const ModelParams& p) {
    QPOptions o;
    o.tol = p.qp_tol;
    o.max_iter = p.qp_max_iter;
    return o;
}

void record_qp(SideDiagnostics& d, const QPSolution& s) {
    d.qp_status = s.status;
    d.qp_iterations = s.iterations;
    d.stationarity = s.stationarity;
    d.primal_residual = s.primal_residual;
    d.complementarity = s.complementarity;
}

Matrix augment(const Matrix& X) {
    Matrix H(X.rows(), X.cols() + 1);
    H << X, Vector::Ones(X.rows());
    return H;
}

// Cholesky of XᵀX + δI for the twin duals.
Eigen::LLT<Matrix> gram_factor(const Matrix& X, const std::optional<double>& delta_opt) {
    Matrix M = X.transpose() * X;
    const double delta = delta_opt.value_or(kAutoDeltaScale * std::max(M.trace() / static_cast<double>(M.rows()), 1e-300));
    M.diagonal().array() += delta;
    Eigen::LLT<Matrix> llt(M);
    if (llt.info() != Eigen::Success || !(llt.matrixLLT().diagonal().array() > 0.0).all())
        throw SingularSystemError("twin dual: Gram matrix is singular; use delta > 0");
    return llt;
}

struct DualSide {
    Vector u;  // [w; b]
    QPSolution qp;
};

// min ½vᵀ R(own + δI)⁻¹Rᵀ v − qᵀv over 0 ≤ v ≤ upper; returns sign·(ownᵀown + δI)⁻¹Rᵀv.
DualSide solve_twin_dual(const Matrix& own, const Matrix& R, const Vector& q, const Vector& upper, double sign,
                         const ModelParams& p) {
    const auto llt = gram_factor(own, p.delta);
    BoxQP qp;
    qp.factor = llt.matrixL().solve(R.transpose()).transpose();
    qp.q = q;
    qp.lower = Vector::Zero(q.size());
    qp.upper = upper;
    DualSide out;
    out.qp = solve_box_qp(qp, qp_options(p));
    out.u = sign * llt.solve(R.transpose() * out.qp.x);
    return out;
}

TwinModel twin_from_duals(const DualSide& one, const DualSide& two, Eigen::Index n, const ModelParams& p) {
    TwinModel m;
    m.kind = SurfaceKind::linear;
    m.s1 = QuadraticSurface::affine(one.u.head(n), one.u(n));
    m.s2 = QuadraticSurface::affine(two.u.head(n), two.u(n));
    m.params = p;
    record_qp(m.d1, one.qp);
    record_qp(m.d2, two.qp);
    m.d1.objective = -one.qp.objective;
    m.d2.objective = -two.qp.objective;
    return m;
}

void check_sets(const Matrix& A, const Matrix& B) {
    if (A.rows() == 0 || B.rows() == 0) throw std::invalid_argument("both classes must be non-empty");
    if (A.cols() != B.cols()) throw std::invalid_argument("class matrices have different dimensions");
}

}  // namespace

SvmModel fit_svm_dual(const LabeledDataset& ds, double C, const QPOptions& opts) {
    ds.validate_for_training();
    if (!(C > 0.0)) throw std::invalid_argument("fit_svm_dual: C must be positive");
    const Eigen::Index m = ds.size();
    Vector y(m);
    for (Eigen::Index i = 0; i < m; ++i) y(i) = ds.labels[static_cast<std::size_t>(i)];
    BoxQP qp;
    qp.factor = y.asDiagonal() * ds.points;
    qp.q = Vector::Ones(m);
    qp.lower = Vector::Zero(m);
    qp.upper = Vector::Constant(m, C);
    qp.equality = y;
    const QPSolution s = solve_box_qp(qp, opts);

    SvmModel out;
    out.alpha = s.x;
    out.w = qp.factor.transpose() * s.x;
    out.params.C1 = out.params.C2 = C;
    const Vector f = ds.points * out.w;
    const double tol = 1e-6 * C;
    double sum = 0.0;
    int free_count = 0;
    double lb = -kInf, ub = kInf;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double a = s.x(i);
        if (a > tol && a < C - tol) {
            sum += y(i) - f(i);
            ++free_count;
        } else if (a <= tol) {
            // y(f + b) >= 1
            if (y(i) > 0) lb = std::max(lb, 1.0 - f(i));
            else ub = std::min(ub, -1.0 - f(i));
        } else {
            // y(f + b) <= 1
            if (y(i) > 0) ub = std::min(ub, 1.0 - f(i));
            else lb = std::max(lb, -1.0 - f(i));
        }
    }
    if (free_count > 0) {
        out.b = sum / free_count;
    } else if (std::isfinite(lb) && std::isfinite(ub)) {
        out.b = 0.5 * (lb + ub);
    } else {
        out.b = std::isfinite(lb) ? lb : (std::isfinite(ub) ? ub : 0.0);
    }
    record_qp(out.diag, s);
    out.diag.objective = -s.objective;
    out.diag.xi = (1.0 - (y.array() * (f.array() + out.b))).cwiseMax(0.0);
    return out;
}

TwinModel fit_tsvm_dual(const Matrix& A, const Matrix& B, const ModelParams& p) {
    check_sets(A, B);
    p.validate();
    const Matrix H = augment(A), G = augment(B);
    const DualSide one = solve_twin_dual(H, G, Vector::Ones(B.rows()), Vector::Constant(B.rows(), p.C1), -1.0, p);
    const DualSide two = solve_twin_dual(G, H, Vector::Ones(A.rows()), Vector::Constant(A.rows(), p.C2), 1.0, p);
    TwinModel m = twin_from_duals(one, two, A.cols(), p);
    m.d1.xi = (1.0 + (G * one.u).array()).cwiseMax(0.0);
    m.d2.xi = (1.0 - (H * two.u).array()).cwiseMax(0.0);
    return m;
}

TwinModel fit_u_tsvm_dual(const Matrix& A, const Matrix& B, const Matrix& U, const ModelParams& p) {
    check_sets(A, B);
    if (U.rows() && U.cols() != A.cols()) throw std::invalid_argument("Universum points have wrong dimension");
    p.validate();
    const Matrix H = augment(A), G = augment(B), O = augment(U);
    const Eigen::Index mu = O.rows();
    auto stacked = [&](const Matrix& top) {
        Matrix R(top.rows() + mu, top.cols());
        R << top, -O;
        return R;
    };
    auto rhs = [&](Eigen::Index k) {
        Vector q(k + mu);
        q << Vector::Ones(k), Vector::Constant(mu, p.eps - 1.0);
        return q;
    };
    auto upper = [&](Eigen::Index k, double C) {
        Vector u(k + mu);
        u << Vector::Constant(k, C), Vector::Constant(mu, p.Cu);
        return u;
    };
    const DualSide one = solve_twin_dual(H, stacked(G), rhs(B.rows()), upper(B.rows(), p.C1), -1.0, p);
    const DualSide two = solve_twin_dual(G, stacked(H), rhs(A.rows()), upper(A.rows(), p.C2), 1.0, p);
    TwinModel m = twin_from_duals(one, two, A.cols(), p);
    m.d1.xi = (1.0 + (G * one.u).array()).cwiseMax(0.0);
    m.d2.xi = (1.0 - (H * two.u).array()).cwiseMax(0.0);
    if (mu) {
        m.d1.psi = ((p.eps - 1.0) - (O * one.u).array()).cwiseMax(0.0);
        m.d2.psi = ((p.eps - 1.0) + (O * two.u).array()).cwiseMax(0.0);
    }
    return m;
}

// ---------------------------------------------------------------- primal quadratic models

GeneralQP build_hinge_qp(const HingeSide& side, FeatureMap map, Eigen::Index n) {
    const Eigen::Index d = feature_size(map, n);
    Eigen::Index rows = 0;
    for (const auto& g : side.groups) rows += g.points->rows();
    const Eigen::Index nv = d + 1 + rows;

    const SetStats fit = side.fit->rows() ? set_stats(*side.fit, map) : SetStats::empty(d);
    Matrix top(d + 1, d + 1);
    top.topLeftCorner(d, d) = fit.gram;
    top.col(d).head(d) = fit.sum;
    top.row(d).head(d) = fit.sum.transpose();
    top(d, d) = static_cast<double>(fit.count);
    if (side.lambda != 0.0) top.diagonal().head(hvec_size(n)).array() += side.lambda;
    top *= 2.0;

    GeneralQP qp;
    std::vector<Eigen::Triplet<double>> tp;
    for (Eigen::Index j = 0; j <= d; ++j)
        for (Eigen::Index i = 0; i <= d; ++i)
            if (top(i, j) != 0.0) tp.emplace_back(i, j, top(i, j));
    qp.P.resize(nv, nv);
    qp.P.setFromTriplets(tp.begin(), tp.end());
    qp.p = Vector::Zero(nv);

    std::vector<Eigen::Triplet<double>> tg;
    qp.h.resize(rows);
    Eigen::Index row = 0;
    for (const auto& g : side.groups) {
        if (g.points->rows() == 0) continue;
        const Matrix S = map_points(*g.points, map);
        for (Eigen::Index k = 0; k < S.cols(); ++k, ++row) {
            // sign·(zᵀr + c) + slack ≥ t  ⇔  −sign·rᵀz − sign·c − slack ≤ −t
            for (Eigen::Index i = 0; i < d; ++i)
                if (S(i, k) != 0.0) tg.emplace_back(row, i, -g.sign * S(i, k));
            tg.emplace_back(row, d, -g.sign);
            tg.emplace_back(row, d + 1 + row, -1.0);
            qp.h(row) = -g.target;
            qp.p(d + 1 + row) = g.penalty;
        }
    }
    qp.G.resize(rows, nv);
    qp.G.setFromTriplets(tg.begin(), tg.end());
    qp.nonneg.assign(static_cast<std::size_t>(nv), 0);
    for (Eigen::Index k = d + 1; k < nv; ++k) qp.nonneg[static_cast<std::size_t>(k)] = 1;
    return qp;
}

HingeSolution solve_hinge_side(const HingeSide& side, FeatureMap map, Eigen::Index n, const QPOptions& opts) {
    const GeneralQP qp = build_hinge_qp(side, map, n);
    const QPSolution s = solve_general_qp(qp, opts);
    const Eigen::Index d = feature_size(map, n);
    HingeSolution out;
    out.z = s.x.head(d);
    out.c = s.x(d);
    record_qp(out.diag, s);
    out.diag.objective = s.objective;
    Eigen::Index off = d + 1;
    for (std::size_t k = 0; k < side.groups.size(); ++k) {
        const Eigen::Index len = side.groups[k].points->rows();
        (k == 0 ? out.diag.xi : out.diag.psi) = s.x.segment(off, len);
        off += len;
    }
    return out;
}

namespace {

TwinModel twin_from_hinge(const HingeSolution& a, const HingeSolution& b, Eigen::Index n, const ModelParams& p) {
    TwinModel m;
    m.kind = SurfaceKind::quadratic;
    m.s1 = QuadraticSurface::unflatten(a.z, a.c, n);
    m.s2 = QuadraticSurface::unflatten(b.z, b.c, n);
    m.params = p;
    m.d1 = a.diag;
    m.d2 = b.diag;
    return m;
}

}  // namespace

TwinModel fit_qtsvm(const Matrix& A, const Matrix& B, const ModelParams& p) {
    check_sets(A, B);
    p.validate();
    const auto map = FeatureMap::quadratic;
    const HingeSide one{&A, {{&B, -1.0, 1.0, p.C1}}, 0.0};
    const HingeSide two{&B, {{&A, 1.0, 1.0, p.C2}}, 0.0};
    return twin_from_hinge(solve_hinge_side(one, map, A.cols(), qp_options(p)),
                           solve_hinge_side(two, map, A.cols(), qp_options(p)), A.cols(), p);
}

TwinModel fit_u_qtsvm(const Matrix& A, const Matrix& B, const Matrix& U, const ModelParams& p) {
    check_sets(A, B);
    if (U.rows() && U.cols() != A.cols()) throw std::invalid_argument("Universum points have wrong dimension");
    p.validate();
    const auto map = FeatureMap::quadratic;
    const HingeSide one{&A, {{&B, -1.0, 1.0, p.C1}, {&U, 1.0, -1.0 + p.eps, p.Cu}}, 0.0};
    const HingeSide two{&B, {{&A, 1.0, 1.0, p.C2}, {&U, -1.0, -1.0 + p.eps, p.Cu}}, 0.0};
    return twin_from_hinge(solve_hinge_side(one, map, A.cols(), qp_options(p)),
                           solve_hinge_side(two, map, A.cols(), qp_options(p)), A.cols(), p);
}

TwinModel fit_im_u_qtsvm_sets(const Matrix& A, const Matrix& B, const Matrix& B_tilde, const Matrix& U,
                              const Matrix& U_hat, const ModelParams& p) {
    check_sets(A, B);
    p.validate();
    const auto map = FeatureMap::quadratic;
    // Majority Universum constraint uses the target 1 − ε as stated for this model.
    const HingeSide one{&A, {{&B_tilde, -1.0, 1.0, p.C1}, {&U_hat, 1.0, -1.0 + p.eps, p.Cuhat}}, p.lambda1};
    const HingeSide two{&B, {{&A, 1.0, 1.0, p.C2}, {&U, 1.0, 1.0 - p.eps, p.Cu}}, p.lambda2};
    return twin_from_hinge(solve_hinge_side(one, map, A.cols(), qp_options(p)),
                           solve_hinge_side(two, map, A.cols(), qp_options(p)), A.cols(), p);
}

TwinModel fit_im_u_qtsvm(const LabeledDataset& ds, const ModelParams& p, std::uint64_t seed,
                         ImbalanceSample* sample_out) {
    ds.validate_for_training();
    ImbalanceSample smp = imbalance_sample(ds, seed);
    TwinModel m = fit_im_u_qtsvm_sets(smp.pair.A, ds.negatives(), smp.pair.B_tilde, smp.universum.U,
                                      smp.universum.U_hat, p);
    if (sample_out) *sample_out = std::move(smp);
    return m;
}

}  // namespace qsurf
