#pragma once

#include "qsurf/embed.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace qsurf {

class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Ordering { natural, reversed };

struct SolveOptions {
    /// Ridge added to the diagonal. nullopt: 1e−8·trace(M)/dim. 0: no ridge,
    /// singular systems raise SingularSystemError.
    std::optional<double> delta;
    Ordering ordering = Ordering::natural;
    /// Refine against M itself (not M + δI) until ‖Mx − rhs‖ ≤ refine_tol·(1 + ‖rhs‖).
    bool refine = true;
    double refine_tol = 1e-10;
    int max_refine = 30;
    /// Appended to singularity messages so callers can name the failing condition.
    std::string context;
};

struct SolveDiagnostics {
    double delta = 0.0;          // ridge actually used
    double rcond = 0.0;          // reciprocal condition estimate of M + δI
    double residual = 0.0;       // ‖Mx − rhs‖ (unregularized M)
    int refinements = 0;
    bool bumped = false;         // the ridge was increased once after a failed factorization
};

inline constexpr double kAutoDeltaScale = 1e-8;

/// Solves (M + δI)x = rhs with an LDLᵀ factorization, then iteratively refines
/// toward M x = rhs. Throws SingularSystemError when the factorization fails
/// after one ridge bump, or when δ = 0 and M is numerically singular.
Vector solve_spd_system(const Matrix& M, const Vector& rhs, const SolveOptions& opts = {},
                        SolveDiagnostics* diag = nullptr);

}  // namespace qsurf
