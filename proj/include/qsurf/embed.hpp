#pragma once

// Half-vectorization and the quadratic-surface embedding.
//
// Every quadratic model in the library is linear in the flattened parameter
// z = [hvec(W); b]. A point x is mapped to r(x) so that
//
//     zᵀr(x) + c = ½ xᵀWx + bᵀx + c.
//
// hvec uses column-major lower-triangular order:
//     a11, a21, ..., an1, a22, ..., an2, ..., ann
// and that order is recorded in every serialized model (kHvecOrderTag).

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstddef>
#include <string_view>

namespace qsurf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr std::string_view kHvecOrderTag = "colmajor-lower";

constexpr Eigen::Index hvec_size(Eigen::Index n) { return n * (n + 1) / 2; }

/// Position of entry (i, j), i >= j, inside hvec of an order-n matrix.
constexpr Eigen::Index hvec_index(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
    return j * (2 * n - j + 1) / 2 + (i - j);
}

/// Length of an embedded point: n(n+1)/2 quadratic terms followed by n linear terms.
constexpr Eigen::Index embed_size(Eigen::Index n) { return hvec_size(n) + n; }

/// Symmetric matrix stored by its half-vector.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(Eigen::Index order);  // zero matrix

    /// Throws std::invalid_argument unless `full` is square and exactly symmetric.
    static SymmetricMatrix from_full(const Matrix& full);
    static SymmetricMatrix from_hvec(Eigen::Index order, const Vector& half);

    Eigen::Index order() const { return order_; }
    const Vector& hvec() const { return half_; }
    Matrix full() const;

    double operator()(Eigen::Index i, Eigen::Index j) const;

    /// W·x without forming W.
    Vector times(const Vector& x) const;

    /// Sum of squares of the stored (lower-triangular) entries, i.e. Σ_{i<=j} W_ij².
    double hvec_squared_norm() const { return half_.squaredNorm(); }

private:
    Eigen::Index order_ = 0;
    Vector half_;
};

Vector hvec(const SymmetricMatrix& a);

/// Column-major vectorization of a square matrix.
Vector vec(const Matrix& a);

/// D_n: n² × n(n+1)/2 with D_n·hvec(A) = vec(A) for symmetric A.
Eigen::SparseMatrix<double> duplication_matrix(Eigen::Index n);

/// L_n: n(n+1)/2 × n² with L_n·vec(A) = hvec(A); L_n·D_n = I.
Eigen::SparseMatrix<double> elimination_matrix(Eigen::Index n);

/// r(x) = [q(x); x] where q(x) holds ½x_i² on the diagonal slots and
/// x_i·x_j on the off-diagonal slots, so that hvec(W)ᵀq(x) = ½xᵀWx.
/// Throws std::invalid_argument on non-finite input.
Vector embed_point(const Vector& x);

/// Writes r(x) into `out` (length embed_size(x.size())). No validation.
void embed_point_into(const double* x, Eigen::Index n, double* out);

/// Extracts the hvec(W) block of z, i.e. V·z.
inline auto selector_apply(const Vector& z, Eigen::Index n) { return z.head(hvec_size(n)); }

/// Diagonal of VᵀV as a vector of length embed_size(n): ones over the hvec block, zeros after.
Vector selector_gram_diagonal(Eigen::Index n);

struct QuadraticSurface {
    SymmetricMatrix W;
    Vector b;
    double c = 0.0;

    Eigen::Index dim() const { return b.size(); }

    /// z = [hvec(W); b].
    Vector flatten() const;
    static QuadraticSurface unflatten(const Vector& z, double c, Eigen::Index n);

    /// Hyperplane wᵀx + c as a surface with W = 0.
    static QuadraticSurface affine(const Vector& w, double c);
};

/// ½xᵀWx + bᵀx + c. Throws std::invalid_argument on dimension mismatch.
double eval_surface(const QuadraticSurface& s, const Vector& x);

/// ‖Wx + b‖².
double surface_gradient_sqnorm(const QuadraticSurface& s, const Vector& x);

}  // namespace qsurf
