#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>

#include "relkit/pairs.hpp"
#include "relkit/relation.hpp"

namespace relkit {

using json = nlohmann::json;

class parse_error : public error {
public:
    using error::error;
};

inline Mat matrix_from_json(const json& rows, const std::string& where) {
    if (!rows.is_array())
        throw parse_error(where + ": expected an array of rows");
    const int r = static_cast<int>(rows.size());
    if (r == 0) return Mat(0, 0);
    if (!rows[0].is_array()) throw parse_error(where + ": rows must be arrays of numbers");
    const int c = static_cast<int>(rows[0].size());
    Mat m(r, c);
    for (int i = 0; i < r; ++i) {
        if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != c)
            throw parse_error(where + ": row " + std::to_string(i) + " has inconsistent length");
        for (int j = 0; j < c; ++j) {
            if (!rows[i][j].is_number())
                throw parse_error(where + ": entry (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") is not a number");
            m(i, j) = rows[i][j].get<double>();
        }
    }
    return m;
}

inline json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

/// Parsed form of an input document describing a relation (and, for pair
/// documents, the component matrices).
struct relation_document {
    std::string kind;
    int dim_h = 0;
    int dim_k = 0;
    linear_relation relation;
    std::optional<Mat> pair_a;
    std::optional<Mat> pair_b;
    tolerance_config tolerances;
};

inline tolerance_config tolerances_from_json(const json& doc, tolerance_config base) {
    if (!doc.contains("tolerances")) return base;
    const json& t = doc.at("tolerances");
    if (t.contains("rank_rtol")) base.rank_rtol = t.at("rank_rtol").get<double>();
    if (t.contains("orth")) base.orth = t.at("orth").get<double>();
    if (t.contains("eq")) base.eq = t.at("eq").get<double>();
    if (t.contains("contain")) base.contain = t.at("contain").get<double>();
    if (t.contains("metric")) base.metric = t.at("metric").get<double>();
    if (t.contains("oracle")) base.oracle = t.at("oracle").get<double>();
    base.validate();
    return base;
}

inline relation_document parse_relation_document(const json& doc,
                                                 const tolerance_config& base_tol = {}) {
    for (const char* field : {"kind", "dim_h", "dim_k", "payload"}) {
        if (!doc.contains(field))
            throw parse_error(std::string("document: missing field '") + field + "'");
    }
    const std::string kind = doc.at("kind").get<std::string>();
    const int dh = doc.at("dim_h").get<int>();
    const int dk = doc.at("dim_k").get<int>();
    if (dh <= 0 || dk <= 0) throw parse_error("document: dim_h and dim_k must be positive");
    tolerance_config tol = tolerances_from_json(doc, base_tol);
    const json& payload = doc.at("payload");

    if (kind == "operator") {
        Mat m = matrix_from_json(payload.at("matrix"), "payload.matrix");
        if (m.rows() != dk || m.cols() != dh)
            throw parse_error("payload.matrix: expected shape dim_k x dim_h");
        return {kind, dh, dk, linear_relation::from_operator(m, tol), {}, {}, tol};
    }
    if (kind == "graph_span") {
        Mat gens = matrix_from_json(payload.at("generators"), "payload.generators");
        if (gens.rows() > 0 && gens.cols() != dh + dk)
            throw parse_error("payload.generators: rows must have dim_h + dim_k entries");
        return {kind, dh, dk,
                linear_relation::from_graph_span(dh, dk, Mat(gens.transpose()), tol), {}, {}, tol};
    }
    if (kind == "pair") {
        Mat a = matrix_from_json(payload.at("a"), "payload.a");
        Mat b = matrix_from_json(payload.at("b"), "payload.b");
        if (a.rows() != dh) throw parse_error("payload.a: expected dim_h rows");
        if (b.rows() != dk) throw parse_error("payload.b: expected dim_k rows");
        operator_pair p = pair_relation(a, b, tol);
        return {kind, dh, dk, p.relation, a, b, tol};
    }
    if (kind == "product") {
        Mat x = matrix_from_json(payload.at("x"), "payload.x");
        Mat y = matrix_from_json(payload.at("y"), "payload.y");
        if (x.rows() > 0 && x.cols() != dh) throw parse_error("payload.x: rows must live in R^dim_h");
        if (y.rows() > 0 && y.cols() != dk) throw parse_error("payload.y: rows must live in R^dim_k");
        subspace sx = x.rows() == 0 ? subspace::zero(dh) : subspace::span(Mat(x.transpose()), tol);
        subspace sy = y.rows() == 0 ? subspace::zero(dk) : subspace::span(Mat(y.transpose()), tol);
        return {kind, dh, dk, linear_relation::product_space(sx, sy), {}, {}, tol};
    }
    throw parse_error("document: unknown kind '" + kind + "'");
}

inline relation_document parse_relation_document_text(const std::string& text,
                                                      const tolerance_config& base_tol = {}) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("document: invalid JSON: ") + e.what());
    }
    return parse_relation_document(doc, base_tol);
}

/// Subspace documents carry explicit spanning vectors as rows.
inline subspace parse_subspace_document(const json& doc, const tolerance_config& tol = {}) {
    if (!doc.contains("ambient_dim"))
        throw parse_error("subspace document: missing field 'ambient_dim'");
    const int n = doc.at("ambient_dim").get<int>();
    if (n <= 0) throw parse_error("subspace document: ambient_dim must be positive");
    if (!doc.contains("vectors")) return subspace::zero(n);
    Mat rows = matrix_from_json(doc.at("vectors"), "subspace.vectors");
    if (rows.rows() == 0) return subspace::zero(n);
    if (rows.cols() != n) throw parse_error("subspace.vectors: rows must have ambient_dim entries");
    return subspace::span(Mat(rows.transpose()), tol);
}

inline json subspace_to_json(const subspace& s) {
    return json{{"ambient_dim", s.ambient_dim()}, {"dim", s.dim()},
                {"frame", matrix_to_json(s.frame())}};
}

inline json relation_to_json(const linear_relation& t) {
    return json{{"dim_h", t.dim_h()},
                {"dim_k", t.dim_k()},
                {"graph_frame", matrix_to_json(t.graph().frame())}};
}

inline linear_relation relation_from_json(const json& j, const tolerance_config& tol = {}) {
    const int dh = j.at("dim_h").get<int>();
    const int dk = j.at("dim_k").get<int>();
    Mat frame = matrix_from_json(j.at("graph_frame"), "relation.graph_frame");
    return linear_relation(dh, dk, subspace(dh + dk, frame, tol));
}

inline subspace subspace_from_json(const json& j, const tolerance_config& tol = {}) {
    const int n = j.at("ambient_dim").get<int>();
    Mat frame = matrix_from_json(j.at("frame"), "subspace.frame");
    if (frame.size() == 0) return subspace::zero(n);
    return subspace(n, frame, tol);
}

}  // namespace relkit
