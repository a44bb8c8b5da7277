#pragma once

#include "qsurf/dataset.hpp"
#include "qsurf/embed.hpp"
#include "qsurf/linsolve.hpp"
#include "qsurf/params.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>

namespace qsurf {

enum class SurfaceKind { linear, quadratic };

enum class QPStatus { converged, max_iter };

/// Fit record for one of the two twin subproblems.
struct SideDiagnostics {
    Vector xi;   // class-constraint residuals / slacks
    Vector psi;  // Universum residuals / slacks (empty without Universum)
    double objective = 0.0;
    double gradient_norm = 0.0;  // closed-form fits: ‖Mx − rhs‖
    double rhs_norm = 0.0;
    SolveDiagnostics solve;
    // QP-based fits
    std::optional<QPStatus> qp_status;
    int qp_iterations = 0;
    double stationarity = 0.0;
    double primal_residual = 0.0;
    double complementarity = 0.0;
};

struct TwinModel {
    SurfaceKind kind = SurfaceKind::quadratic;
    QuadraticSurface s1;  // fits class +1
    QuadraticSurface s2;  // fits class −1
    ModelParams params;
    SideDiagnostics d1, d2;

    Eigen::Index dim() const { return s1.dim(); }
};

struct SvmModel {
    Vector w;
    double b = 0.0;
    ModelParams params;
    Vector alpha;
    SideDiagnostics diag;

    Eigen::Index dim() const { return w.size(); }
};

/// A trained classifier as stored on disk: the fitted body plus the scaler
/// that maps raw features into the space it was trained in.
struct Model {
    std::string id;
    std::variant<TwinModel, SvmModel> body;
    std::optional<ScalerState> scaler;
    std::map<std::string, std::string> info;  // seed, budgets, warnings

    Eigen::Index dim() const;
    bool is_svm() const { return std::holds_alternative<SvmModel>(body); }
    const TwinModel& twin() const { return std::get<TwinModel>(body); }
    const SvmModel& svm() const { return std::get<SvmModel>(body); }
};

/// Line-oriented text format, doubles written with 17 significant digits.
std::string serialize_model(const Model& m);
Model deserialize_model(const std::string& text);
void save_model(const Model& m, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

/// Human-readable fit report (objectives, residuals, solver status, info).
std::string format_diagnostics(const Model& m);

}  // namespace qsurf
