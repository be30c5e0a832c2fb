#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "quadmap.hpp"

namespace qcvx {

namespace detail {

inline double scalar_from_json(const nlohmann::json& j, const char* what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        // fixtures store exact decimal strings to avoid transcription drift
        const std::string s = j.get<std::string>();
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("map json: bad numeric string in ") + what);
        }
        if (pos != s.size())
            throw std::invalid_argument(std::string("map json: bad numeric string in ") + what);
        return v;
    }
    throw std::invalid_argument(std::string("map json: expected a number in ") + what);
}

inline Cx entry_from_json(const nlohmann::json& j, FieldTag field, const char* what) {
    if (j.is_array()) {
        if (j.size() != 2)
            throw std::invalid_argument(std::string("map json: [re, im] pair expected in ") + what);
        Cx v{scalar_from_json(j[0], what), scalar_from_json(j[1], what)};
        if (field == FieldTag::Real && v.im != 0.0)
            throw std::invalid_argument(std::string("map json: complex entry in a real map at ") + what);
        return v;
    }
    return Cx{scalar_from_json(j, what)};
}

} // namespace detail

/// Parse the map schema {"field", "n", "m", "A": [m][n][n], "b": [m][n]}.
/// Entries may be numbers, decimal strings, or [re, im] pairs. Matrices are
/// symmetrized on load; deviation above 1e-9 is an error.
inline QuadraticMap map_from_json(const nlohmann::json& j,
                                  double* hermiticity_dev = nullptr) {
    QuadraticMap f;
    if (hermiticity_dev) *hermiticity_dev = 0.0;
    if (!j.is_object()) throw std::invalid_argument("map json: top level must be an object");
    for (const char* key : {"field", "n", "m", "A", "b"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("map json: missing field '") + key + "'");

    const std::string field = j["field"].get<std::string>();
    if (field == "real") f.field = FieldTag::Real;
    else if (field == "complex") f.field = FieldTag::Complex;
    else throw std::invalid_argument("map json: field must be 'real' or 'complex'");

    f.n = j["n"].get<std::size_t>();
    f.m = j["m"].get<std::size_t>();
    if (f.n < 1 || f.m < 1) throw std::invalid_argument("map json: n and m must be >= 1");

    const auto& ja = j["A"];
    const auto& jb = j["b"];
    if (!ja.is_array() || ja.size() != f.m)
        throw std::invalid_argument("map json: A must hold m matrices");
    if (!jb.is_array() || jb.size() != f.m)
        throw std::invalid_argument("map json: b must hold m vectors");

    for (std::size_t k = 0; k < f.m; ++k) {
        std::ostringstream tag;
        tag << "A[" << k << "]";
        const auto& jm = ja[k];
        if (!jm.is_array() || jm.size() != f.n)
            throw std::invalid_argument("map json: " + tag.str() + " must be " +
                                        std::to_string(f.n) + " rows");
        Mat a(f.n, f.n);
        for (std::size_t i = 0; i < f.n; ++i) {
            if (!jm[i].is_array() || jm[i].size() != f.n)
                throw std::invalid_argument("map json: " + tag.str() + " row " +
                                            std::to_string(i) + " must have n entries");
            for (std::size_t col = 0; col < f.n; ++col)
                a(i, col) = detail::entry_from_json(jm[i][col], f.field, tag.str().c_str());
        }
        double dev = 0.0;
        Mat sym = hermitian_part(a, &dev);
        if (dev > 1e-9 * (1.0 + frob_norm(a)))
            throw std::invalid_argument("map json: " + tag.str() +
                                        " deviates from hermitian beyond tolerance");
        if (hermiticity_dev) *hermiticity_dev = std::max(*hermiticity_dev, dev);
        f.A.push_back(std::move(sym));

        Vec b(f.n);
        std::ostringstream tagb;
        tagb << "b[" << k << "]";
        if (!jb[k].is_array() || jb[k].size() != f.n)
            throw std::invalid_argument("map json: " + tagb.str() + " must have n entries");
        for (std::size_t i = 0; i < f.n; ++i)
            b[i] = detail::entry_from_json(jb[k][i], f.field, tagb.str().c_str());
        f.b.push_back(std::move(b));
    }
    f.validate();
    return f;
}

inline QuadraticMap load_map(const std::string& path,
                             double* hermiticity_dev = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open map file: " + path);
    nlohmann::json j;
    in >> j;
    return map_from_json(j, hermiticity_dev);
}

inline nlohmann::json map_to_json(const QuadraticMap& f) {
    nlohmann::json j;
    j["field"] = f.field == FieldTag::Real ? "real" : "complex";
    j["n"] = f.n;
    j["m"] = f.m;
    for (std::size_t k = 0; k < f.m; ++k) {
        nlohmann::json jm = nlohmann::json::array();
        for (std::size_t i = 0; i < f.n; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t col = 0; col < f.n; ++col) {
                const Cx e = f.A[k](i, col);
                if (f.field == FieldTag::Complex) row.push_back({e.re, e.im});
                else row.push_back(e.re);
            }
            jm.push_back(row);
        }
        j["A"].push_back(jm);
        nlohmann::json bv = nlohmann::json::array();
        for (std::size_t i = 0; i < f.n; ++i) {
            const Cx e = f.b[k][i];
            if (f.field == FieldTag::Complex) bv.push_back({e.re, e.im});
            else bv.push_back(e.re);
        }
        j["b"].push_back(bv);
    }
    return j;
}

} // namespace qcvx
