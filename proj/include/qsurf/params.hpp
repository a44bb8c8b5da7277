#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qsurf {

struct ModelParams {
    double C1 = 1.0;
    double C2 = 1.0;
    double Cu = 1.0;     // Universum penalty (majority side of the imbalance models)
    double Cuhat = 1.0;  // reduced-Universum penalty (minority side of the imbalance models)
    double eps = 0.5;    // Universum tolerance
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    /// System ridge; nullopt picks 1e−8·trace/dim per system, 0 disables it.
    std::optional<double> delta;

    double qp_tol = 1e-6;
    int qp_max_iter = 50000;

    /// Throws std::invalid_argument naming the offending field. ε = 1 is
    /// accepted as the limiting case where Universum targets collapse to 0.
    void validate() const;

    /// Sets a parameter by name. Shared axes: C → C1, C2; cu → Cu, Cuhat;
    /// lambda → lambda1, lambda2. Throws on unknown names.
    void set(const std::string& name, double value);
    static const std::vector<std::string>& names();
    double get(const std::string& name) const;
};

}  // namespace qsurf
