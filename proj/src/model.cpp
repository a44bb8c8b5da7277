#include "qsurf/model.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace qsurf {
namespace {

constexpr const char* kMagic = "qsurf-model 1";

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

void put_vector(std::ostream& os, const std::string& key, const Vector& v) {
    os << key << ' ' << v.size();
    for (Eigen::Index i = 0; i < v.size(); ++i) os << ' ' << num(v(i));
    os << '\n';
}

Vector read_vector(std::istringstream& in, const std::string& key) {
    Eigen::Index len = -1;
    if (!(in >> len) || len < 0) throw std::runtime_error("model file: bad length for '" + key + "'");
    Vector v(len);
    for (Eigen::Index i = 0; i < len; ++i) {
        std::string tok;
        if (!(in >> tok)) throw std::runtime_error("model file: '" + key + "' is truncated");
        v(i) = std::stod(tok);
    }
    return v;
}

double read_scalar(std::istringstream& in, const std::string& key) {
    std::string tok;
    if (!(in >> tok)) throw std::runtime_error("model file: missing value for '" + key + "'");
    return std::stod(tok);
}

const char* kind_name(const Model& m) {
    if (m.is_svm()) return "svm";
    return m.twin().kind == SurfaceKind::linear ? "linear" : "quadratic";
}

}  // namespace

Eigen::Index Model::dim() const {
    return is_svm() ? svm().dim() : twin().dim();
}

std::string serialize_model(const Model& m) {
    std::ostringstream os;
    os << kMagic << '\n';
    os << "id " << m.id << '\n';
    os << "kind " << kind_name(m) << '\n';
    os << "n " << m.dim() << '\n';
    os << "hvec_order " << kHvecOrderTag << '\n';
    const ModelParams& p = m.is_svm() ? m.svm().params : m.twin().params;
    for (const auto& name : ModelParams::names()) {
        if (name == "delta" && !p.delta) continue;
        os << "param " << name << ' ' << num(p.get(name)) << '\n';
    }
    if (m.is_svm()) {
        put_vector(os, "w", m.svm().w);
        os << "b " << num(m.svm().b) << '\n';
    } else {
        const auto& t = m.twin();
        put_vector(os, "z1", t.s1.flatten());
        os << "c1 " << num(t.s1.c) << '\n';
        put_vector(os, "z2", t.s2.flatten());
        os << "c2 " << num(t.s2.c) << '\n';
    }
    if (m.scaler) {
        put_vector(os, "scaler_min", m.scaler->min);
        put_vector(os, "scaler_max", m.scaler->max);
    }
    for (const auto& [k, v] : m.info) os << "info " << k << ' ' << v << '\n';
    return os.str();
}

Model deserialize_model(const std::string& text) {
    std::istringstream all(text);
    std::string line;
    if (!std::getline(all, line) || line != kMagic) throw std::runtime_error("not a qsurf model file");
    Model m;
    std::string kind;
    Eigen::Index n = -1;
    ModelParams p;
    Vector z1, z2, w, smin, smax;
    double c1 = 0, c2 = 0, b = 0;
    while (std::getline(all, line)) {
        if (line.empty()) continue;
        std::istringstream in(line);
        std::string key;
        in >> key;
        if (key == "id") {
            in >> m.id;
        } else if (key == "kind") {
            in >> kind;
        } else if (key == "n") {
            in >> n;
        } else if (key == "hvec_order") {
            std::string tag;
            in >> tag;
            if (tag != kHvecOrderTag) throw std::runtime_error("model file: unsupported hvec order '" + tag + "'");
        } else if (key == "param") {
            std::string name;
            in >> name;
            p.set(name, read_scalar(in, name));
        } else if (key == "z1") {
            z1 = read_vector(in, key);
        } else if (key == "z2") {
            z2 = read_vector(in, key);
        } else if (key == "w") {
            w = read_vector(in, key);
        } else if (key == "c1") {
            c1 = read_scalar(in, key);
        } else if (key == "c2") {
            c2 = read_scalar(in, key);
        } else if (key == "b") {
            b = read_scalar(in, key);
        } else if (key == "scaler_min") {
            smin = read_vector(in, key);
        } else if (key == "scaler_max") {
            smax = read_vector(in, key);
        } else if (key == "info") {
            std::string k, rest;
            in >> k;
            std::getline(in >> std::ws, rest);
            m.info[k] = rest;
        } else {
            throw std::runtime_error("model file: unknown key '" + key + "'");
        }
    }
    if (n < 1) throw std::runtime_error("model file: missing dimension");
    if (kind == "svm") {
        if (w.size() != n) throw std::runtime_error("model file: w has wrong length");
        SvmModel s;
        s.w = w;
        s.b = b;
        s.params = p;
        m.body = s;
    } else if (kind == "linear" || kind == "quadratic") {
        if (z1.size() != embed_size(n) || z2.size() != embed_size(n))
            throw std::runtime_error("model file: surface vectors have wrong length");
        TwinModel t;
        t.kind = kind == "linear" ? SurfaceKind::linear : SurfaceKind::quadratic;
        t.s1 = QuadraticSurface::unflatten(z1, c1, n);
        t.s2 = QuadraticSurface::unflatten(z2, c2, n);
        t.params = p;
        m.body = t;
    } else {
        throw std::runtime_error("model file: unknown kind '" + kind + "'");
    }
    if (smin.size() || smax.size()) {
        if (smin.size() != n || smax.size() != n) throw std::runtime_error("model file: scaler has wrong length");
        m.scaler = ScalerState{smin, smax};
    }
    return m;
}

void save_model(const Model& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << serialize_model(m);
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return deserialize_model(buf.str());
}

namespace {

void side_report(std::ostream& os, const std::string& tag, const SideDiagnostics& d) {
    os << tag << ".objective = " << num(d.objective) << '\n';
    if (d.qp_status) {
        os << tag << ".qp_status = " << (*d.qp_status == QPStatus::converged ? "converged" : "max_iter") << '\n';
        os << tag << ".qp_iterations = " << d.qp_iterations << '\n';
        os << tag << ".stationarity = " << num(d.stationarity) << '\n';
        os << tag << ".primal_residual = " << num(d.primal_residual) << '\n';
        os << tag << ".complementarity = " << num(d.complementarity) << '\n';
    } else {
        os << tag << ".gradient_norm = " << num(d.gradient_norm) << '\n';
        os << tag << ".gradient_bound = " << num(1e-8 * (1.0 + d.rhs_norm)) << '\n';
        os << tag << ".delta = " << num(d.solve.delta) << '\n';
        os << tag << ".rcond = " << num(d.solve.rcond) << '\n';
    }
    os << tag << ".xi_count = " << d.xi.size() << '\n';
    os << tag << ".psi_count = " << d.psi.size() << '\n';
}

}  // namespace

std::string format_diagnostics(const Model& m) {
    std::ostringstream os;
    os << "model = " << m.id << '\n';
    os << "kind = " << kind_name(m) << '\n';
    os << "n = " << m.dim() << '\n';
    if (m.is_svm()) {
        side_report(os, "svm", m.svm().diag);
    } else {
        side_report(os, "class1", m.twin().d1);
        side_report(os, "class2", m.twin().d2);
    }
    for (const auto& [k, v] : m.info) os << k << " = " << v << '\n';
    return os.str();
}

}  // namespace qsurf
