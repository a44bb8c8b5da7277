#include "qsurf/params.hpp"

#include <cmath>
#include <stdexcept>

namespace qsurf {

void ModelParams::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("invalid parameter: ") + what);
    };
    need(C1 > 0.0 && std::isfinite(C1), "C1 must be positive");
    need(C2 > 0.0 && std::isfinite(C2), "C2 must be positive");
    need(Cu >= 0.0 && std::isfinite(Cu), "Cu must be >= 0");
    need(Cuhat >= 0.0 && std::isfinite(Cuhat), "Cuhat must be >= 0");
    need(eps > 0.0 && eps <= 1.0, "eps must be in (0, 1)");
    need(lambda1 >= 0.0 && std::isfinite(lambda1), "lambda1 must be >= 0");
    need(lambda2 >= 0.0 && std::isfinite(lambda2), "lambda2 must be >= 0");
    need(!delta || (*delta >= 0.0 && std::isfinite(*delta)), "delta must be >= 0");
    need(qp_tol > 0.0, "qp_tol must be positive");
    need(qp_max_iter > 0, "qp_max_iter must be positive");
}

const std::vector<std::string>& ModelParams::names() {
    static const std::vector<std::string> n{"C1", "C2", "Cu", "Cuhat", "eps", "lambda1", "lambda2", "delta"};
    return n;
}

void ModelParams::set(const std::string& name, double v) {
    if (name == "C") {
        C1 = C2 = v;
    } else if (name == "cu") {
        Cu = Cuhat = v;
    } else if (name == "lambda") {
        lambda1 = lambda2 = v;
    } else if (name == "C1") {
        C1 = v;
    } else if (name == "C2") {
        C2 = v;
    } else if (name == "Cu") {
        Cu = v;
    } else if (name == "Cuhat") {
        Cuhat = v;
    } else if (name == "eps") {
        eps = v;
    } else if (name == "lambda1") {
        lambda1 = v;
    } else if (name == "lambda2") {
        lambda2 = v;
    } else if (name == "delta") {
        delta = v;
    } else {
        throw std::invalid_argument("unknown parameter '" + name + "'");
    }
}

double ModelParams::get(const std::string& name) const {
    if (name == "C" || name == "C1") return C1;
    if (name == "C2") return C2;
    if (name == "cu" || name == "Cu") return Cu;
    if (name == "Cuhat") return Cuhat;
    if (name == "eps") return eps;
    if (name == "lambda" || name == "lambda1") return lambda1;
    if (name == "lambda2") return lambda2;
    if (name == "delta") return delta.value_or(-1.0);
    throw std::invalid_argument("unknown parameter '" + name + "'");
}

}  // namespace qsurf
