#ifndef BERNPOLY_IO_HPP
#define BERNPOLY_IO_HPP

/**
 * @file io.hpp
 * @brief File formats: correlation matrices (CSV or JSON) and marginal specs.
 *
 * CSV: n lines of n comma-separated reals, symmetric with unit diagonal
 * (both within 1e-9), no header. JSON: {"n": int, "rho": [...]} with rho in
 * PairIndex order. Marginal specs: a JSON array of objects such as
 * {"kind": "exponential", "mean": 2}.
 */

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "bernpoly/marginal.hpp"
#include "bernpoly/polytope.hpp"

namespace bernpoly {

using Json = nlohmann::ordered_json;

/// Malformed user input; maps to exit status 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kMatrixTol = 1e-9;

/// Rounds to 9 significant digits so serialization prints at most that many.
inline double sig9(double v)
{
    if (!std::isfinite(v) || v == 0.0)
        return v == 0.0 ? 0.0 : v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::strtod(buf, nullptr);
}

inline Json number_array(std::span<const double> v)
{
    Json a = Json::array();
    for (double x : v)
        a.push_back(sig9(x));
    return a;
}

namespace detail {

inline std::string trim(const std::string& s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

inline double parse_real(const std::string& token, std::size_t line, std::size_t col)
{
    const std::string t = trim(token);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
        const std::string where =
            "line " + std::to_string(line) + ", column " + std::to_string(col);
        if (line == 1)
            throw InputError("non-numeric entry '" + t + "' at " + where +
                             " (header rows are not accepted)");
        throw InputError("non-numeric entry '" + t + "' at " + where);
    }
    return v;
}

}  // namespace detail

inline CorrelationVector parse_matrix_csv(std::istream& in)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty())
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(ss, cell, ','))
            row.push_back(detail::parse_real(cell, lineno, ++col));
        rows.push_back(std::move(row));
    }
    const std::size_t n = rows.size();
    if (n < 2)
        throw InputError("correlation matrix needs at least 2 rows");
    for (std::size_t i = 0; i < n; ++i)
        if (rows[i].size() != n)
            throw InputError("matrix is not square: row " + std::to_string(i + 1) + " has " +
                             std::to_string(rows[i].size()) + " entries, expected " +
                             std::to_string(n));

    std::vector<double> rho;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(rows[i][i] - 1.0) > kMatrixTol)
            throw InputError("diagonal entry (" + std::to_string(i + 1) + "," +
                             std::to_string(i + 1) + ") is not 1");
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(rows[i][j] - rows[j][i]) > kMatrixTol)
                throw InputError("matrix is not symmetric at (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ")");
            if (rows[i][j] < -1.0 || rows[i][j] > 1.0)
                throw InputError("entry (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ") outside [-1,1]");
            rho.push_back(rows[i][j]);
        }
    }
    return CorrelationVector(n, std::move(rho));
}

inline CorrelationVector parse_matrix_json(const Json& doc)
{
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("rho"))
        throw InputError("JSON correlation file needs fields \"n\" and \"rho\"");
    if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 2)
        throw InputError("\"n\" must be an integer >= 2");
    const auto n = static_cast<std::size_t>(doc["n"].get<long long>());
    const Json& arr = doc["rho"];
    if (!arr.is_array())
        throw InputError("\"rho\" must be an array");
    if (arr.size() != pair_count(n))
        throw InputError("\"rho\" has " + std::to_string(arr.size()) + " entries; n=" +
                         std::to_string(n) + " needs n(n-1)/2 = " +
                         std::to_string(pair_count(n)));
    std::vector<double> rho;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        if (!arr[k].is_number())
            throw InputError("\"rho\" entry " + std::to_string(k + 1) + " is not a number");
        const double v = arr[k].get<double>();
        if (v < -1.0 || v > 1.0)
            throw InputError("\"rho\" entry " + std::to_string(k + 1) + " outside [-1,1]");
        rho.push_back(v);
    }
    return CorrelationVector(n, std::move(rho));
}

inline std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline Json parse_json_text(const std::string& text, const std::string& origin)
{
    try {
        return Json::parse(text);
    }
    catch (const Json::parse_error& e) {
        throw InputError("'" + origin + "' is not valid JSON: " + e.what());
    }
}

/// JSON when the extension is .json or the content opens with '{'; CSV otherwise.
inline CorrelationVector read_correlation_file(const std::string& path)
{
    const std::string text = read_text_file(path);
    const std::string body = detail::trim(text);
    const bool json_ext = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    if (json_ext || (!body.empty() && body.front() == '{'))
        return parse_matrix_json(parse_json_text(text, path));
    std::istringstream in(text);
    return parse_matrix_csv(in);
}

namespace detail {

inline double field(const Json& obj, const char* name, std::size_t index)
{
    if (!obj.contains(name) || !obj[name].is_number())
        throw InputError("marginal " + std::to_string(index) + " needs numeric field \"" + name +
                         "\"");
    return obj[name].get<double>();
}

inline std::vector<double> real_list(const Json& obj, const char* name, std::size_t index)
{
    if (!obj.contains(name) || !obj[name].is_array())
        throw InputError("marginal " + std::to_string(index) + " needs array field \"" + name +
                         "\"");
    std::vector<double> out;
    for (const auto& v : obj[name]) {
        if (!v.is_number())
            throw InputError("marginal " + std::to_string(index) + " field \"" + name +
                             "\" must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace detail

inline Marginal parse_marginal(const Json& obj, std::size_t index = 1)
{
    if (!obj.is_object() || !obj.contains("kind") || !obj["kind"].is_string())
        throw InputError("marginal " + std::to_string(index) + " needs a string \"kind\"");
    const std::string kind = obj["kind"].get<std::string>();
    try {
        if (kind == "uniform")
            return Marginal::uniform(detail::field(obj, "a", index), detail::field(obj, "b", index));
        if (kind == "exponential")
            return Marginal::exponential(detail::field(obj, "mean", index));
        if (kind == "normal")
            return Marginal::normal(detail::field(obj, "mu", index),
                                    detail::field(obj, "sigma", index));
        if (kind == "finite_discrete")
            return Marginal::finite_discrete(detail::real_list(obj, "values", index),
                                             detail::real_list(obj, "probabilities", index));
        if (kind == "bernoulli")
            return Marginal::bernoulli(detail::field(obj, "p", index));
    }
    catch (const DomainError& e) {
        throw InputError("marginal " + std::to_string(index) + ": " + e.what());
    }
    throw InputError("marginal " + std::to_string(index) + " has unknown kind '" + kind + "'");
}

inline std::vector<Marginal> parse_marginals(const Json& doc)
{
    if (!doc.is_array() || doc.empty())
        throw InputError("marginal spec must be a non-empty JSON array");
    std::vector<Marginal> out;
    for (std::size_t k = 0; k < doc.size(); ++k)
        out.push_back(parse_marginal(doc[k], k + 1));
    return out;
}

inline std::vector<Marginal> read_marginals_file(const std::string& path)
{
    return parse_marginals(parse_json_text(read_text_file(path), path));
}

inline Json marginal_to_json(const Marginal& m)
{
    Json j;
    j["kind"] = m.kind_name();
    std::visit(
        [&j](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, UniformMarginal>) {
                j["a"] = k.a;
                j["b"] = k.b;
            }
            else if constexpr (std::is_same_v<K, ExponentialMarginal>)
                j["mean"] = k.mean;
            else if constexpr (std::is_same_v<K, NormalMarginal>) {
                j["mu"] = k.mu;
                j["sigma"] = k.sigma;
            }
            else if constexpr (std::is_same_v<K, FiniteDiscreteMarginal>) {
                j["values"] = k.values;
                j["probabilities"] = k.probabilities;
            }
            else
                j["p"] = k.p;
        },
        m.kind());
    return j;
}

}  // namespace bernpoly

#endif  // BERNPOLY_IO_HPP
