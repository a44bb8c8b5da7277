#include "qsurf/closed_form.hpp"

#include <stdexcept>

namespace qsurf {

LsSystem assemble_ls(const LsSide& side, FeatureMap map, Eigen::Index n) {
    const Eigen::Index d = feature_size(map, n);
    LsSystem sys{Matrix::Zero(d + 1, d + 1), Vector::Zero(d + 1)};
    for (const auto& g : side.groups) {
        if (g.weight == 0.0 || g.stats->count == 0) continue;
        if (g.stats->gram.rows() != d) throw std::invalid_argument("assemble_ls: statistics have wrong dimension");
        const double cnt = static_cast<double>(g.stats->count);
        sys.M.topLeftCorner(d, d).noalias() += g.weight * g.stats->gram;
        sys.M.col(d).head(d).noalias() += g.weight * g.stats->sum;
        sys.M(d, d) += g.weight * cnt;
        if (g.target != 0.0) {
            sys.rhs.head(d).noalias() += (g.weight * g.target) * g.stats->sum;
            sys.rhs(d) += g.weight * g.target * cnt;
        }
    }
    sys.M.row(d).head(d) = sys.M.col(d).head(d).transpose();
    if (side.lambda != 0.0) {
        if (map != FeatureMap::quadratic) throw std::invalid_argument("assemble_ls: Hessian ridge needs the quadratic map");
        sys.M.diagonal().head(hvec_size(n)).array() += side.lambda;
    }
    return sys;
}

double ls_objective(const LsSide& side, FeatureMap map, Eigen::Index n, const Vector& zc) {
    const Eigen::Index d = feature_size(map, n);
    const Vector z = zc.head(d);
    const double c = zc(d);
    double f = 0.0;
    for (const auto& g : side.groups) {
        if (g.weight == 0.0 || g.stats->count == 0) continue;
        const double cnt = static_cast<double>(g.stats->count);
        // Σ (zᵀr + c − t)² = zᵀGz + 2(c − t) zᵀs + (c − t)² m
        const double ct = c - g.target;
        f += g.weight * (z.dot(g.stats->gram * z) + 2.0 * ct * z.dot(g.stats->sum) + ct * ct * cnt);
    }
    if (side.lambda != 0.0) f += side.lambda * z.head(hvec_size(n)).squaredNorm();
    return f;
}

LsSolution solve_ls_side(const LsSide& side, FeatureMap map, Eigen::Index n, const SolveOptions& opts) {
    const LsSystem sys = assemble_ls(side, map, n);
    LsSolution out;
    const Vector zc = solve_spd_system(sys.M, sys.rhs, opts, &out.diag.solve);
    const Eigen::Index d = feature_size(map, n);
    out.z = zc.head(d);
    out.c = zc(d);
    out.diag.gradient_norm = (sys.M * zc - sys.rhs).norm();
    out.diag.rhs_norm = sys.rhs.norm();
    out.diag.objective = ls_objective(side, map, n, zc);
    return out;
}

std::pair<LsSide, LsSide> ls_sides(LsVariant v, const LsStats& s, const ModelParams& p) {
    LsSide one, two;
    const bool universum = v == LsVariant::ls_u_tsvm || v == LsVariant::ls_u_qtsvm;
    switch (v) {
    case LsVariant::ls_tsvm:
    case LsVariant::ls_qtsvm:
    case LsVariant::ls_u_tsvm:
    case LsVariant::ls_u_qtsvm:
        one.groups = {{&s.A, 1.0, 0.0}, {&s.B, p.C1, -1.0}};
        two.groups = {{&s.B, 1.0, 0.0}, {&s.A, p.C2, 1.0}};
        if (universum) {
            one.groups.push_back({&s.U, p.Cu, -1.0 + p.eps});
            two.groups.push_back({&s.U, p.Cu, 1.0 - p.eps});
        }
        break;
    case LsVariant::im_ls_u_qtsvm:
        one.groups = {{&s.A, 1.0, 0.0}, {&s.B_tilde, p.C1, -1.0}, {&s.U_hat, p.Cuhat, -1.0 + p.eps}};
        two.groups = {{&s.B, 1.0, 0.0}, {&s.A, p.C2, 1.0}, {&s.U, p.Cu, 1.0 - p.eps}};
        one.lambda = p.lambda1;
        two.lambda = p.lambda2;
        break;
    }
    return {one, two};
}

namespace {

SurfaceKind kind_of(FeatureMap map) {
    return map == FeatureMap::quadratic ? SurfaceKind::quadratic : SurfaceKind::linear;
}

QuadraticSurface to_surface(FeatureMap map, const Vector& z, double c, Eigen::Index n) {
    if (map == FeatureMap::quadratic) return QuadraticSurface::unflatten(z, c, n);
    return QuadraticSurface::affine(z, c);
}

// Residual zᵀr + c − t for every row of `points`.
Vector residuals(const Matrix& points, FeatureMap map, const Vector& z, double c, double t) {
    if (points.rows() == 0) return Vector();
    return (map_points(points, map).transpose() * z).array() + (c - t);
}

void check_sets(const Matrix& A, const Matrix& B) {
    if (A.rows() == 0 || B.rows() == 0) throw std::invalid_argument("both classes must be non-empty");
    if (A.cols() != B.cols()) throw std::invalid_argument("class matrices have different dimensions");
}

TwinModel fit_with_sets(LsVariant v, FeatureMap map, const Matrix& A, const Matrix& B, const Matrix& U,
                        const ModelParams& p) {
    check_sets(A, B);
    if (U.rows() && U.cols() != A.cols()) throw std::invalid_argument("Universum points have wrong dimension");
    p.validate();
    LsStats s;
    s.map = map;
    s.n = A.cols();
    s.A = set_stats(A, map);
    s.B = set_stats(B, map);
    s.U = U.rows() ? set_stats(U, map) : SetStats::empty(feature_size(map, s.n));
    TwinModel m = fit_ls_from_stats(v, s, p);
    const Vector z1 = m.s1.flatten(), z2 = m.s2.flatten();
    const Vector w1 = map == FeatureMap::quadratic ? z1 : m.s1.b;
    const Vector w2 = map == FeatureMap::quadratic ? z2 : m.s2.b;
    m.d1.xi = residuals(B, map, w1, m.s1.c, -1.0);
    m.d2.xi = residuals(A, map, w2, m.s2.c, 1.0);
    if (v == LsVariant::ls_u_tsvm || v == LsVariant::ls_u_qtsvm) {
        m.d1.psi = residuals(U, map, w1, m.s1.c, -1.0 + p.eps);
        m.d2.psi = residuals(U, map, w2, m.s2.c, 1.0 - p.eps);
    }
    return m;
}

}  // namespace

TwinModel fit_ls_from_stats(LsVariant v, const LsStats& s, const ModelParams& p, Ordering ordering) {
    if (s.A.count == 0 || s.B.count == 0) throw std::invalid_argument("both classes must be non-empty");
    const auto [one, two] = ls_sides(v, s, p);
    SolveOptions opts;
    opts.delta = p.delta;
    opts.ordering = ordering;
    if (v == LsVariant::im_ls_u_qtsvm)
        opts.context = "the minority points, undersampled majority points and reduced Universum points "
                       "must be affinely independent for a unique solution; use delta > 0";
    else
        opts.context = "use delta > 0";
    const LsSolution r1 = solve_ls_side(one, s.map, s.n, opts);
    const LsSolution r2 = solve_ls_side(two, s.map, s.n, opts);
    TwinModel m;
    m.kind = kind_of(s.map);
    m.s1 = to_surface(s.map, r1.z, r1.c, s.n);
    m.s2 = to_surface(s.map, r2.z, r2.c, s.n);
    m.params = p;
    m.d1 = r1.diag;
    m.d2 = r2.diag;
    return m;
}

TwinModel fit_ls_tsvm(const Matrix& A, const Matrix& B, const ModelParams& p) {
    return fit_with_sets(LsVariant::ls_tsvm, FeatureMap::linear, A, B, Matrix(0, A.cols()), p);
}

TwinModel fit_ls_u_tsvm(const Matrix& A, const Matrix& B, const Matrix& U, const ModelParams& p) {
    return fit_with_sets(LsVariant::ls_u_tsvm, FeatureMap::linear, A, B, U, p);
}

TwinModel fit_ls_qtsvm(const Matrix& A, const Matrix& B, const ModelParams& p) {
    return fit_with_sets(LsVariant::ls_qtsvm, FeatureMap::quadratic, A, B, Matrix(0, A.cols()), p);
}

TwinModel fit_ls_u_qtsvm(const Matrix& A, const Matrix& B, const Matrix& U, const ModelParams& p) {
    return fit_with_sets(LsVariant::ls_u_qtsvm, FeatureMap::quadratic, A, B, U, p);
}

TwinModel fit_im_ls_u_qtsvm_sets(const Matrix& A, const Matrix& B, const Matrix& B_tilde, const Matrix& U,
                                 const Matrix& U_hat, const ModelParams& p, Ordering ordering) {
    check_sets(A, B);
    if (B.rows() < A.rows())
        throw std::invalid_argument("imbalance model needs |I2| >= |I1| (minority must be labelled +1)");
    p.validate();
    const auto map = FeatureMap::quadratic;
    const Eigen::Index n = A.cols(), d = feature_size(map, n);
    auto stats = [&](const Matrix& X) { return X.rows() ? set_stats(X, map) : SetStats::empty(d); };
    LsStats s{map, n, stats(A), stats(B), stats(B_tilde), stats(U), stats(U_hat)};
    TwinModel m = fit_ls_from_stats(LsVariant::im_ls_u_qtsvm, s, p, ordering);
    const Vector z1 = m.s1.flatten(), z2 = m.s2.flatten();
    m.d1.xi = residuals(B_tilde, map, z1, m.s1.c, -1.0);
    m.d1.psi = residuals(U_hat, map, z1, m.s1.c, -1.0 + p.eps);
    m.d2.xi = residuals(A, map, z2, m.s2.c, 1.0);
    m.d2.psi = residuals(U, map, z2, m.s2.c, 1.0 - p.eps);
    return m;
}

TwinModel fit_im_ls_u_qtsvm(const LabeledDataset& ds, const ModelParams& p, std::uint64_t seed,
                            ImbalanceSample* sample_out) {
    ds.validate_for_training();
    ImbalanceSample smp = imbalance_sample(ds, seed);
    TwinModel m = fit_im_ls_u_qtsvm_sets(smp.pair.A, ds.negatives(), smp.pair.B_tilde, smp.universum.U,
                                         smp.universum.U_hat, p);
    if (sample_out) *sample_out = std::move(smp);
    return m;
}

}  // namespace qsurf
