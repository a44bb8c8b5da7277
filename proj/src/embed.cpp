#include "qsurf/embed.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsurf {

SymmetricMatrix::SymmetricMatrix(Eigen::Index order)
    : order_(order), half_(Vector::Zero(hvec_size(order))) {
    if (order < 0) throw std::invalid_argument("SymmetricMatrix: negative order");
}

SymmetricMatrix SymmetricMatrix::from_full(const Matrix& full) {
    if (full.rows() != full.cols())
        throw std::invalid_argument("SymmetricMatrix: matrix is not square");
    const Eigen::Index n = full.rows();
    SymmetricMatrix s(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j; i < n; ++i) {
            if (full(i, j) != full(j, i))
                throw std::invalid_argument("SymmetricMatrix: matrix is not symmetric");
            s.half_(hvec_index(n, i, j)) = full(i, j);
        }
    }
    return s;
}

SymmetricMatrix SymmetricMatrix::from_hvec(Eigen::Index order, const Vector& half) {
    if (half.size() != hvec_size(order))
        throw std::invalid_argument("SymmetricMatrix: half-vector has length " +
                                    std::to_string(half.size()) + ", expected " +
                                    std::to_string(hvec_size(order)));
    SymmetricMatrix s(order);
    s.half_ = half;
    return s;
}

Matrix SymmetricMatrix::full() const {
    Matrix m(order_, order_);
    for (Eigen::Index j = 0; j < order_; ++j) {
        for (Eigen::Index i = j; i < order_; ++i) {
            const double v = half_(hvec_index(order_, i, j));
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

double SymmetricMatrix::operator()(Eigen::Index i, Eigen::Index j) const {
    if (i < j) std::swap(i, j);
    return half_(hvec_index(order_, i, j));
}

Vector SymmetricMatrix::times(const Vector& x) const {
    Vector y = Vector::Zero(order_);
    for (Eigen::Index j = 0; j < order_; ++j) {
        const Eigen::Index base = hvec_index(order_, j, j);
        y(j) += half_(base) * x(j);
        for (Eigen::Index i = j + 1; i < order_; ++i) {
            const double w = half_(base + (i - j));
            y(i) += w * x(j);
            y(j) += w * x(i);
        }
    }
    return y;
}

Vector hvec(const SymmetricMatrix& a) { return a.hvec(); }

Vector vec(const Matrix& a) {
    return Eigen::Map<const Vector>(a.data(), a.size());
}

Eigen::SparseMatrix<double> duplication_matrix(Eigen::Index n) {
    if (n < 1) throw std::invalid_argument("duplication_matrix: n must be >= 1");
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(n * n));
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::Index h = i >= j ? hvec_index(n, i, j) : hvec_index(n, j, i);
            t.emplace_back(j * n + i, h, 1.0);
        }
    }
    Eigen::SparseMatrix<double> d(n * n, hvec_size(n));
    d.setFromTriplets(t.begin(), t.end());
    return d;
}

Eigen::SparseMatrix<double> elimination_matrix(Eigen::Index n) {
    if (n < 1) throw std::invalid_argument("elimination_matrix: n must be >= 1");
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(hvec_size(n)));
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j; i < n; ++i) t.emplace_back(hvec_index(n, i, j), j * n + i, 1.0);
    Eigen::SparseMatrix<double> l(hvec_size(n), n * n);
    l.setFromTriplets(t.begin(), t.end());
    return l;
}

void embed_point_into(const double* x, Eigen::Index n, double* out) {
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        out[k++] = 0.5 * x[j] * x[j];
        for (Eigen::Index i = j + 1; i < n; ++i) out[k++] = x[i] * x[j];
    }
    for (Eigen::Index i = 0; i < n; ++i) out[k++] = x[i];
}

Vector embed_point(const Vector& x) {
    if (!x.allFinite()) throw std::invalid_argument("embed_point: non-finite coordinate");
    Vector r(embed_size(x.size()));
    embed_point_into(x.data(), x.size(), r.data());
    return r;
}

Vector selector_gram_diagonal(Eigen::Index n) {
    Vector d = Vector::Zero(embed_size(n));
    d.head(hvec_size(n)).setOnes();
    return d;
}

Vector QuadraticSurface::flatten() const {
    Vector z(embed_size(dim()));
    z << W.hvec(), b;
    return z;
}

QuadraticSurface QuadraticSurface::unflatten(const Vector& z, double c, Eigen::Index n) {
    if (z.size() != embed_size(n))
        throw std::invalid_argument("QuadraticSurface::unflatten: length mismatch");
    return {SymmetricMatrix::from_hvec(n, z.head(hvec_size(n))), z.tail(n), c};
}

QuadraticSurface QuadraticSurface::affine(const Vector& w, double c) {
    return {SymmetricMatrix(w.size()), w, c};
}

static void check_dim(const QuadraticSurface& s, const Vector& x, const char* who) {
    if (x.size() != s.dim() || s.W.order() != s.dim())
        throw std::invalid_argument(std::string(who) + ": dimension mismatch (surface " +
                                    std::to_string(s.dim()) + ", point " +
                                    std::to_string(x.size()) + ")");
}

double eval_surface(const QuadraticSurface& s, const Vector& x) {
    check_dim(s, x, "eval_surface");
    return 0.5 * x.dot(s.W.times(x)) + s.b.dot(x) + s.c;
}

double surface_gradient_sqnorm(const QuadraticSurface& s, const Vector& x) {
    check_dim(s, x, "surface_gradient_sqnorm");
    return (s.W.times(x) + s.b).squaredNorm();
}

}  // namespace qsurf
