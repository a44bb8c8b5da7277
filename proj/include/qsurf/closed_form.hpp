#pragma once

// Least-squares twin trainers.
//
// Every LS variant solves, per class, a problem of the form
//
//     min_{z,c}  Σ_g w_g Σ_{r∈S_g} (zᵀr + c − t_g)²  +  λ‖Vz‖²
//
// over a few point groups g with weight w_g and target t_g, whose normal
// equations are the block systems of the individual models. Groups are
// described by their sufficient statistics, so a training split can be
// reused across parameter values.

#include "qsurf/kernels.hpp"
#include "qsurf/linsolve.hpp"
#include "qsurf/model.hpp"
#include "qsurf/sampling.hpp"

#include <cstdint>
#include <vector>

namespace qsurf {

struct LsGroup {
    const SetStats* stats;
    double weight;
    double target;
};

struct LsSide {
    std::vector<LsGroup> groups;
    double lambda = 0.0;  // ridge on the hvec(W) block; quadratic map only
};

/// Normal equations M [z; c] = rhs of one side (no system ridge).
struct LsSystem {
    Matrix M;
    Vector rhs;
};

LsSystem assemble_ls(const LsSide& side, FeatureMap map, Eigen::Index n);

/// Σ_g w_g Σ (zᵀr + c − t_g)² + λ‖Vz‖² evaluated from the statistics.
double ls_objective(const LsSide& side, FeatureMap map, Eigen::Index n, const Vector& zc);

struct LsSolution {
    Vector z;
    double c = 0.0;
    SideDiagnostics diag;
};

LsSolution solve_ls_side(const LsSide& side, FeatureMap map, Eigen::Index n, const SolveOptions& opts);

/// Statistics of every set an LS model may touch. Unused sets stay empty.
struct LsStats {
    FeatureMap map = FeatureMap::quadratic;
    Eigen::Index n = 0;
    SetStats A, B, B_tilde, U, U_hat;
};

enum class LsVariant { ls_tsvm, ls_u_tsvm, ls_qtsvm, ls_u_qtsvm, im_ls_u_qtsvm };

/// The two sides of `variant` for parameters p.
std::pair<LsSide, LsSide> ls_sides(LsVariant variant, const LsStats& s, const ModelParams& p);

TwinModel fit_ls_from_stats(LsVariant variant, const LsStats& s, const ModelParams& p,
                            Ordering ordering = Ordering::natural);

TwinModel fit_ls_tsvm(const Matrix& A, const Matrix& B, const ModelParams& p);
TwinModel fit_ls_u_tsvm(const Matrix& A, const Matrix& B, const Matrix& U, const ModelParams& p);
TwinModel fit_ls_qtsvm(const Matrix& A, const Matrix& B, const ModelParams& p);
TwinModel fit_ls_u_qtsvm(const Matrix& A, const Matrix& B, const Matrix& U, const ModelParams& p);

/// Explicit-set form: A minority, B majority, B̃ undersampled majority,
/// U the r Universum points, Û the g reduced points.
TwinModel fit_im_ls_u_qtsvm_sets(const Matrix& A, const Matrix& B, const Matrix& B_tilde, const Matrix& U,
                                 const Matrix& U_hat, const ModelParams& p,
                                 Ordering ordering = Ordering::natural);

/// Runs the imbalance protocol on ds (minority = +1) and fits.
TwinModel fit_im_ls_u_qtsvm(const LabeledDataset& ds, const ModelParams& p, std::uint64_t seed,
                            ImbalanceSample* sample_out = nullptr);

}  // namespace qsurf
