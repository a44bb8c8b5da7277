#pragma once

#include "qsurf/embed.hpp"
#include "qsurf/model.hpp"

#include <Eigen/SparseCore>

#include <optional>
#include <vector>

namespace qsurf {

/// min ½xᵀQx − qᵀx  s.t.  lower ≤ x ≤ upper  [and aᵀx = 0].
/// Q is given either densely or as a factor F with Q = F Fᵀ.
struct BoxQP {
    Matrix Q;
    Matrix factor;
    Vector q;
    Vector lower;
    Vector upper;
    std::optional<Vector> equality;

    Eigen::Index size() const { return q.size(); }
    Vector apply(const Vector& x) const;
    double objective(const Vector& x) const;
};

/// min ½xᵀPx + pᵀx  s.t.  Gx ≤ h,  x_i ≥ 0 where nonneg[i].
struct GeneralQP {
    Eigen::SparseMatrix<double> P;
    Vector p;
    Eigen::SparseMatrix<double> G;
    Vector h;
    std::vector<char> nonneg;

    Eigen::Index size() const { return p.size(); }
    double objective(const Vector& x) const;
};

struct QPOptions {
    double tol = 1e-6;
    int max_iter = 50000;
    bool record_trace = false;
};

struct QPSolution {
    Vector x;
    Vector y;  // multipliers of the inequality rows (general QP)
    double objective = 0.0;
    double stationarity = 0.0;
    double primal_residual = 0.0;
    double complementarity = 0.0;
    int iterations = 0;
    QPStatus status = QPStatus::max_iter;
    std::vector<double> trace;  // objective per accepted iterate when requested
};

/// Euclidean projection onto {lower ≤ x ≤ upper, aᵀx = 0}.
/// Throws std::invalid_argument when the set is empty.
Vector project_box_hyperplane(const Vector& y, const Vector& a, const Vector& lower, const Vector& upper);

/// Monotone projected gradient with Barzilai–Borwein steps and backtracking.
/// Converged when ‖x − Π(x − ∇f)‖∞ ≤ tol·min(1, narrowest box width).
QPSolution solve_box_qp(const BoxQP& prob, const QPOptions& opts = {});

/// ADMM on the splitting Ax = s, s ≤ u with adaptive penalty, followed by an
/// active-set polish. Converged when primal infeasibility, ‖Px + p + Aᵀy‖∞ and
/// max |yᵢ(uᵢ − Aᵢx)| are all ≤ tol.
QPSolution solve_general_qp(const GeneralQP& prob, const QPOptions& opts = {});

}  // namespace qsurf
