#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "betweenness.hpp"
#include "cover_pack.hpp"
#include "products.hpp"
#include "space.hpp"
#include "suites.hpp"

namespace metricpack {

using json = nlohmann::json;

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FileFormat { auto_detect, json_matrix, csv_matrix };
enum class PointMetric { euclidean, manhattan, chebyshev };

namespace detail {

// shortest decimal representation that round-trips the double
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char ch : line) {
        if (ch == ',' || ch == ';' || ch == '\t' || ch == ' ') {
            if (!field.empty()) out.push_back(std::move(field)), field.clear();
        } else if (ch != '\r') {
            field.push_back(ch);
        }
    }
    if (!field.empty()) out.push_back(std::move(field));
    return out;
}

inline std::optional<double> parse_number(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace detail

// ---- spaces --------------------------------------------------------------

inline json to_json(const FiniteMetricSpace& space) {
    json j;
    j["labels"] = space.labels();
    j["matrix"] = space.matrix();
    return j;
}

inline FiniteMetricSpace space_from_json(const json& j, const ToleranceConfig& tol = {}) {
    if (!j.is_object() || !j.contains("matrix"))
        throw ParseError("space JSON must be an object with a \"matrix\" field");
    Matrix m;
    try {
        m = j.at("matrix").get<Matrix>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("space JSON: bad matrix: ") + e.what());
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        try {
            labels = j.at("labels").get<std::vector<std::string>>();
        } catch (const json::exception& e) {
            throw ParseError(std::string("space JSON: bad labels: ") + e.what());
        }
    } else {
        labels = FiniteMetricSpace::default_labels(m.size());
    }
    return FiniteMetricSpace(std::move(labels), m, tol);
}

// Raw n x n matrix from CSV text: n rows of n comma-separated numbers, no
// header. Errors carry 1-based line/column positions.
inline Matrix matrix_from_csv(const std::string& text) {
    Matrix m;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fields = detail::split_fields(line);
        if (fields.empty()) continue;
        std::vector<double> row;
        row.reserve(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto v = detail::parse_number(fields[c]);
            if (!v)
                throw ParseError("CSV matrix: not a number at line " + std::to_string(lineno) +
                                 ", column " + std::to_string(c + 1));
            row.push_back(*v);
        }
        m.push_back(std::move(row));
    }
    if (m.empty()) throw ParseError("CSV matrix: no rows");
    for (std::size_t r = 0; r < m.size(); ++r)
        if (m[r].size() != m.size())
            throw ParseError("CSV matrix: line " + std::to_string(r + 1) + " has " +
                             std::to_string(m[r].size()) + " fields, expected " +
                             std::to_string(m.size()));
    return m;
}

inline FileFormat detect_format(const std::string& path, const std::string& content) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return FileFormat::json_matrix;
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return FileFormat::csv_matrix;
    for (char ch : content) {
        if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') continue;
        return ch == '{' ? FileFormat::json_matrix : FileFormat::csv_matrix;
    }
    return FileFormat::csv_matrix;
}

// Labels + raw matrix without metric validation (the validate command reports
// violations instead of throwing).
inline std::pair<std::vector<std::string>, Matrix> raw_space_from_file(
    const std::string& path, FileFormat format = FileFormat::auto_detect) {
    const std::string content = detail::read_file(path);
    if (format == FileFormat::auto_detect) format = detect_format(path, content);
    if (format == FileFormat::json_matrix) {
        json j;
        try {
            j = json::parse(content);
        } catch (const json::exception& e) {
            throw ParseError(std::string("JSON parse error in ") + path + ": " + e.what());
        }
        if (!j.is_object() || !j.contains("matrix"))
            throw ParseError("space JSON must be an object with a \"matrix\" field");
        Matrix m;
        std::vector<std::string> labels;
        try {
            m = j.at("matrix").get<Matrix>();
            if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
        } catch (const json::exception& e) {
            throw ParseError(std::string("space JSON: ") + e.what());
        }
        if (labels.empty()) labels = FiniteMetricSpace::default_labels(m.size());
        return {std::move(labels), std::move(m)};
    }
    Matrix m = matrix_from_csv(content);
    return {FiniteMetricSpace::default_labels(m.size()), std::move(m)};
}

inline FiniteMetricSpace parse_space_file(const std::string& path,
                                          FileFormat format = FileFormat::auto_detect,
                                          const ToleranceConfig& tol = {}) {
    auto [labels, m] = raw_space_from_file(path, format);
    return FiniteMetricSpace(std::move(labels), m, tol);
}

// ---- point clouds ---------------------------------------------------------

struct PointCloud {
    std::vector<std::vector<double>> rows;
    PointMetric metric_kind = PointMetric::euclidean;
};

inline PointCloud points_from_csv(const std::string& text, PointMetric kind) {
    PointCloud cloud;
    cloud.metric_kind = kind;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool first_data = true;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fields = detail::split_fields(line);
        if (fields.empty()) continue;
        std::vector<double> row;
        bool numeric = true;
        for (const auto& f : fields) {
            const auto v = detail::parse_number(f);
            if (!v) {
                numeric = false;
                break;
            }
            row.push_back(*v);
        }
        if (!numeric) {
            if (first_data) {  // header row
                first_data = false;
                continue;
            }
            throw ParseError("points CSV: non-numeric field at line " + std::to_string(lineno));
        }
        first_data = false;
        if (!cloud.rows.empty() && row.size() != cloud.rows.front().size())
            throw ParseError("points CSV: ragged row at line " + std::to_string(lineno) + " (" +
                             std::to_string(row.size()) + " fields, expected " +
                             std::to_string(cloud.rows.front().size()) + ")");
        cloud.rows.push_back(std::move(row));
    }
    if (cloud.rows.empty()) throw ParseError("points CSV: no data rows");
    return cloud;
}

inline FiniteMetricSpace space_from_points(const PointCloud& cloud, const ToleranceConfig& tol = {}) {
    const std::size_t n = cloud.rows.size();
    const std::size_t dim = cloud.rows.front().size();
    Matrix m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double diff = std::abs(cloud.rows[i][k] - cloud.rows[j][k]);
                switch (cloud.metric_kind) {
                    case PointMetric::euclidean: acc += diff * diff; break;
                    case PointMetric::manhattan: acc += diff; break;
                    case PointMetric::chebyshev: acc = std::max(acc, diff); break;
                }
            }
            if (cloud.metric_kind == PointMetric::euclidean) acc = std::sqrt(acc);
            m[i][j] = m[j][i] = acc;
        }
    return FiniteMetricSpace(m, tol);
}

inline FiniteMetricSpace parse_points_file(const std::string& path, PointMetric kind,
                                           const ToleranceConfig& tol = {}) {
    return space_from_points(points_from_csv(detail::read_file(path), kind), tol);
}

// ---- products ---------------------------------------------------------------

inline json to_json(const ProductSpace& P) {
    json j;
    j["x"] = to_json(P.factor_x());
    j["y"] = to_json(P.factor_y());
    std::vector<double> flat;
    flat.reserve(P.size() * P.size());
    for (std::size_t k1 = 0; k1 < P.size(); ++k1)
        for (std::size_t k2 = 0; k2 < P.size(); ++k2) flat.push_back(P.d(k1, k2));
    j["matrix"] = flat;
    return j;
}

inline ProductSpace product_from_json(const json& j, const ToleranceConfig& tol = {}) {
    if (!j.is_object() || !j.contains("x") || !j.contains("y") || !j.contains("matrix"))
        throw ParseError("product JSON must be an object with \"x\", \"y\" and \"matrix\"");
    auto X = space_from_json(j.at("x"), tol);
    auto Y = space_from_json(j.at("y"), tol);
    std::vector<double> flat;
    try {
        flat = j.at("matrix").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("product JSON: bad matrix: ") + e.what());
    }
    const std::size_t n = X.size() * Y.size();
    if (flat.size() != n * n)
        throw ParseError("product JSON: matrix must hold " + std::to_string(n * n) +
                         " numbers, got " + std::to_string(flat.size()));
    Matrix m(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) m[i][k] = flat[i * n + k];
    return product_custom(X, Y, m, tol);
}

inline ProductSpace parse_product_file(const std::string& path, const ToleranceConfig& tol = {}) {
    json j;
    try {
        j = json::parse(detail::read_file(path));
    } catch (const json::exception& e) {
        throw ParseError(std::string("JSON parse error in ") + path + ": " + e.what());
    }
    return product_from_json(j, tol);
}

inline bool looks_like_product_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (detect_format(path, content) != FileFormat::json_matrix) return false;
    const auto j = json::parse(content, nullptr, false);
    return j.is_object() && j.contains("x") && j.contains("y");
}

// ---- reports ---------------------------------------------------------------

inline json to_json(const ExtendedPositive& v) {
    if (v.is_infinite()) return json("inf");
    return json(v.value());
}

inline json to_json(const WitnessRecord& w) {
    return json{{"kind", w.kind}, {"points", w.points}, {"values", w.values}};
}

inline json to_json(const std::vector<WitnessRecord>& ws) {
    json arr = json::array();
    for (const auto& w : ws) arr.push_back(to_json(w));
    return arr;
}

inline json to_json(const CheckReport& r) {
    return json{{"verdict", r.verdict}, {"exhaustive", r.exhaustive}, {"witnesses", to_json(r.witnesses)}};
}

inline json to_json(const MetricViolation& v) {
    return json{{"kind", to_string(v.kind)}, {"indices", v.indices}, {"magnitude", v.magnitude}};
}

inline json to_json(const ValidationReport& r) {
    json arr = json::array();
    for (const auto& v : r.violations) arr.push_back(to_json(v));
    return json{{"ok", r.ok}, {"violations", arr}};
}

inline json to_json(const CoverResult& r) {
    return json{{"count", r.count},
                {"centers", r.centers.indices()},
                {"optimal", r.optimal},
                {"nodes_explored", r.nodes_explored}};
}

inline json to_json(const PackResult& r) {
    return json{{"count", r.count},
                {"points", r.points.indices()},
                {"optimal", r.optimal},
                {"nodes_explored", r.nodes_explored}};
}

inline json to_json(const ChainClassicalReport& r) {
    return json{{"eps", r.eps},
                {"m_2eps", r.m_2eps.count},
                {"n_eps", r.n_eps.count},
                {"m_eps", r.m_eps.count},
                {"verdict", to_string(r.verdict)}};
}

inline json to_json(const ChainRefinedReport& r) {
    return json{{"eps", r.eps},
                {"t0", to_json(r.ambient_t0)},
                {"scale", r.scale},
                {"m_scaled", r.m_scaled.count},
                {"n_ambient", r.n_ambient.count},
                {"n_hat", r.n_hat.count},
                {"m_hat", r.m_hat.count},
                {"m_star", r.m_star.count},
                {"verdict", to_string(r.verdict)}};
}

inline json to_json(const std::vector<ProfileRecord>& profile) {
    json arr = json::array();
    for (const auto& rec : profile)
        arr.push_back(json{{"eps", rec.eps},
                           {"N", rec.n},
                           {"M", rec.m},
                           {"Mhat", rec.m_hat},
                           {"N_ambient", rec.n_ambient},
                           {"optimal", rec.optimal}});
    return arr;
}

inline std::string profile_csv(const std::vector<ProfileRecord>& profile) {
    std::string out = "eps,N,M,Mhat,N_ambient,optimal\n";
    for (const auto& rec : profile) {
        out += detail::format_double(rec.eps);
        out += ',' + std::to_string(rec.n);
        out += ',' + std::to_string(rec.m);
        out += ',' + std::to_string(rec.m_hat);
        out += ',' + std::to_string(rec.n_ambient);
        out += ',';
        out += rec.optimal ? '1' : '0';
        out += '\n';
    }
    return out;
}

inline json to_json(const SuiteReport& r) {
    json j{{"suite", r.suite},
           {"verdict", to_string(r.verdict)},
           {"cases_run", r.cases_run},
           {"witnesses", to_json(r.witnesses)}};
    if (!r.evidence.empty()) j["evidence"] = to_json(r.evidence);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline json to_json(const NonUltraWitness& w) {
    return json{{"a", w.a}, {"b", w.b}, {"c", w.c},
                {"eps", w.eps}, {"N", w.n_count}, {"M", w.m_count}};
}

inline json to_json(const FactorTable& t) {
    json entries = json::array();
    for (const auto& e : t.entries)
        entries.push_back(json{{"dx", e.dx}, {"dy", e.dy}, {"d", e.d}});
    return json{{"entries", entries}, {"domain_x", t.domain_x}, {"domain_y", t.domain_y}};
}

inline std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& f : detail::split_fields(text)) {
        const auto v = detail::parse_number(f);
        if (!v || *v < 0 || *v != std::floor(*v))
            throw ParseError("index list: bad index '" + f + "'");
        out.push_back(static_cast<std::size_t>(*v));
    }
    return out;
}

}  // namespace metricpack
