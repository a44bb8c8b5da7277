#pragma once

// Hinge-loss trainers. Linear models go through their box-constrained duals;
// quadratic models are solved in primal standard form over (z, c, slacks).

#include "qsurf/dataset.hpp"
#include "qsurf/kernels.hpp"
#include "qsurf/model.hpp"
#include "qsurf/qp.hpp"
#include "qsurf/sampling.hpp"

#include <cstdint>
#include <vector>

namespace qsurf {

/// Soft-margin SVM through its dual: box [0, C], Σyᵢαᵢ = 0.
/// b is averaged over margin support vectors (0 < α < C); without any, the
/// midpoint of the interval allowed by the KKT conditions is used.
SvmModel fit_svm_dual(const LabeledDataset& ds, double C, const QPOptions& opts = {});

/// Box bound of the twin duals is C₁ (resp. C₂), as in the printed duals.
TwinModel fit_tsvm_dual(const Matrix& A, const Matrix& B, const ModelParams& p);
TwinModel fit_u_tsvm_dual(const Matrix& A, const Matrix& B, const Matrix& U, const ModelParams& p);

/// Constraint group of a hinge side: sign·(zᵀr + c) + slack ≥ target, with
/// penalty·slack in the objective.
struct HingeGroup {
    const Matrix* points;  // rows are raw points
    double sign;
    double target;
    double penalty;
};

/// Σ_{fit}(zᵀr + c)² + Σ penalty·slack + λ‖Vz‖² subject to the groups' constraints.
struct HingeSide {
    const Matrix* fit;
    std::vector<HingeGroup> groups;
    double lambda = 0.0;
};

GeneralQP build_hinge_qp(const HingeSide& side, FeatureMap map, Eigen::Index n);

struct HingeSolution {
    Vector z;
    double c = 0.0;
    SideDiagnostics diag;
};

HingeSolution solve_hinge_side(const HingeSide& side, FeatureMap map, Eigen::Index n, const QPOptions& opts);

TwinModel fit_qtsvm(const Matrix& A, const Matrix& B, const ModelParams& p);
TwinModel fit_u_qtsvm(const Matrix& A, const Matrix& B, const Matrix& U, const ModelParams& p);
TwinModel fit_im_u_qtsvm_sets(const Matrix& A, const Matrix& B, const Matrix& B_tilde, const Matrix& U,
                              const Matrix& U_hat, const ModelParams& p);
TwinModel fit_im_u_qtsvm(const LabeledDataset& ds, const ModelParams& p, std::uint64_t seed,
                         ImbalanceSample* sample_out = nullptr);

}  // namespace qsurf
