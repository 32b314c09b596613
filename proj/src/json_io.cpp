#include "conelab/json_io.hpp"

#include <fstream>

namespace conelab {

namespace {

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InputError("expected a complex number as a [re, im] pair");
    const Complex z(j[0].get<double>(), j[1].get<double>());
    if (!is_finite(z)) throw InputError("complex entries must be finite");
    return z;
}

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

RealVector real_vector_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw InputError("expected a nonempty array of reals");
    RealVector v(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw InputError("expected a real number");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
        if (!is_finite(v[static_cast<Eigen::Index>(i)])) throw InputError("reals must be finite");
    }
    return v;
}

Json real_vector_to_json(const RealVector& v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
    Json entries = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        entries.push_back(std::move(row));
    }
    return Json{{"n", m.rows()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
        throw InputError("matrix object needs fields \"n\" and \"entries\"");
    if (!j["n"].is_number_integer()) throw InputError("field \"n\" must be an integer");
    const int n = j["n"].get<int>();
    if (n < 1) throw InputError("field \"n\" must be >= 1");
    const Json& entries = j["entries"];
    if (!entries.is_array() || static_cast<int>(entries.size()) != n)
        throw InputError("field \"entries\" must have n rows");
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
        if (!entries[r].is_array() || static_cast<int>(entries[r].size()) != n)
            throw InputError("row " + std::to_string(r) + " must have n entries");
        for (int c = 0; c < n; ++c) m(r, c) = complex_from_json(entries[r][c]);
    }
    return m;
}

Json hermitian_to_json(const HermitianMatrix& h) { return matrix_to_json(h.mat()); }

HermitianMatrix hermitian_from_json(const Json& j) {
    try {
        return HermitianMatrix(matrix_from_json(j));
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

Json bipartite_to_json(const BipartiteOperator& x) {
    return Json{{"d", x.d()}, {"s", x.s()}, {"mat", hermitian_to_json(x.herm())}};
}

BipartiteOperator bipartite_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("d") || !j.contains("s") || !j.contains("mat"))
        throw InputError("bipartite object needs fields \"d\", \"s\" and \"mat\"");
    if (!j["d"].is_number_integer() || !j["s"].is_number_integer())
        throw InputError("fields \"d\" and \"s\" must be integers");
    const int d = j["d"].get<int>();
    const int s = j["s"].get<int>();
    if (d < 1 || s < 1) throw InputError("fields \"d\" and \"s\" must be >= 1");
    HermitianMatrix h = hermitian_from_json(j["mat"]);
    if (h.dim() != d * s) throw InputError("field \"mat\" must have dimension d*s");
    return BipartiteOperator(d, s, std::move(h));
}

Json vector_to_json(const Vector& v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(complex_to_json(v[i]));
    return arr;
}

Vector vector_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw InputError("expected a nonempty vector");
    Vector v(j.size());
    for (size_t i = 0; i < j.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
    return v;
}

Json verdict_to_json(const Verdict& v) {
    Json cert;
    if (std::holds_alternative<std::monostate>(v.certificate)) {
        cert = Json{{"kind", "none"}};
    } else if (const auto* neg = std::get_if<NegEigenvector>(&v.certificate)) {
        cert = Json{{"kind", "neg_eigenvector"},
                    {"vector", vector_to_json(neg->v)},
                    {"gamma", neg->gamma},
                    {"value", neg->value}};
    } else if (const auto* pv = std::get_if<ProductVectorWitness>(&v.certificate)) {
        cert = Json{{"kind", "product_vector"},
                    {"x", vector_to_json(pv->x)},
                    {"y", vector_to_json(pv->y)},
                    {"value", pv->value}};
    } else if (const auto* dec = std::get_if<Decomposition>(&v.certificate)) {
        cert = Json{{"kind", "decomposition"},
                    {"x1", bipartite_to_json(dec->x1)},
                    {"x2", bipartite_to_json(dec->x2)}};
    } else if (const auto* dw = std::get_if<DualWitness>(&v.certificate)) {
        cert = Json{{"kind", "dual_witness"},
                    {"w", bipartite_to_json(dw->w)},
                    {"pairing", dw->pairing}};
    }
    return Json{{"status", to_string(v.status)}, {"residual", v.residual},
                {"certificate", std::move(cert)}};
}

Json cone_to_json(const PolyhedralCone& c) {
    Json rays = Json::array();
    for (const auto& r : c.rays) rays.push_back(real_vector_to_json(r));
    Json dual = Json::array();
    for (const auto& l : c.dual_rays) dual.push_back(real_vector_to_json(l));
    return Json{{"dim", c.dim},
                {"rays", std::move(rays)},
                {"dual_rays", std::move(dual)},
                {"order_unit", real_vector_to_json(c.order_unit)}};
}

PolyhedralCone cone_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("rays") ||
        !j.contains("dual_rays") || !j.contains("order_unit"))
        throw InputError("cone object needs \"dim\", \"rays\", \"dual_rays\", \"order_unit\"");
    PolyhedralCone c;
    if (!j["dim"].is_number_integer()) throw InputError("field \"dim\" must be an integer");
    c.dim = j["dim"].get<int>();
    if (!j["rays"].is_array() || !j["dual_rays"].is_array())
        throw InputError("fields \"rays\" and \"dual_rays\" must be arrays");
    for (const auto& r : j["rays"]) c.rays.push_back(real_vector_from_json(r));
    for (const auto& l : j["dual_rays"]) c.dual_rays.push_back(real_vector_from_json(l));
    c.order_unit = real_vector_from_json(j["order_unit"]);
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return c;
}

Json report_to_json(const Report& r) {
    Json checks = Json::array();
    for (const auto& item : r.items)
        checks.push_back(Json{{"name", item.name}, {"passed", item.passed},
                              {"detail", item.detail}});
    return Json{{"passed", r.passed}, {"checks", std::move(checks)}};
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError("parse error in " + path + ": " + e.what());
    }
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace conelab
