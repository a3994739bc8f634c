#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cggm/constraints.hpp"
#include "cggm/datagen.hpp"
#include "cggm/errors.hpp"
#include "cggm/sym_mat.hpp"

#include <json.hpp>

namespace cggm {

// File formats: Matrix Market (coordinate/array, general/symmetric) and
// dense CSV for matrices, line-oriented "i j value" triples for the
// constraint map, JSON for ground truths. Indices in files are 1-based.

namespace detail {

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    return in;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << std::setprecision(17);
    return out;
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Symmetry check at 1e-8 relative tolerance, then symmetrize by averaging.
inline SymMat check_and_symmetrize(const Matrix& a, const std::string& source) {
    if (a.rows() != a.cols())
        throw ParseError(source + ": matrix is not square (" +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ")");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * scale)
        throw ParseError(source + ": matrix is not symmetric (max |A - A^T| = " +
                         std::to_string(asym) + ")");
    return SymMat::symmetrized(a);
}

inline double parse_double(const std::string& tok, const std::string& where) {
    try {
        size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(where + ": not a number: '" + tok + "'");
    }
}

}  // namespace detail

// ---------------------------------------------------------------- Matrix Market

inline void write_matrix_market(const std::string& path, const SymMat& x) {
    auto out = detail::open_out(path);
    const Index n = x.n();
    out << "%%MatrixMarket matrix array real symmetric\n";
    out << n << " " << n << "\n";
    for (Index j = 0; j < n; ++j)
        for (Index i = j; i < n; ++i) out << x(i, j) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

inline SymMat read_sym_matrix_market(const std::string& path) {
    auto in = detail::open_in(path);
    std::string banner;
    if (!std::getline(in, banner))
        throw ParseError(path + ": empty file");
    std::istringstream bs(banner);
    std::string head, object, format, field, symmetry;
    bs >> head >> object >> format >> field >> symmetry;
    if (head != "%%MatrixMarket" || detail::lower(object) != "matrix")
        throw ParseError(path + ": missing %%MatrixMarket matrix banner");
    format = detail::lower(format);
    field = detail::lower(field);
    symmetry = detail::lower(symmetry);
    if (format != "coordinate" && format != "array")
        throw ParseError(path + ": unsupported format '" + format + "'");
    if (field != "real" && field != "integer")
        throw ParseError(path + ": unsupported field '" + field + "'");
    if (symmetry != "general" && symmetry != "symmetric")
        throw ParseError(path + ": unsupported symmetry '" + symmetry + "'");

    std::string line;
    auto next_content = [&](std::string& out_line) {
        while (std::getline(in, out_line)) {
            if (out_line.empty() || out_line[0] == '%') continue;
            return true;
        }
        return false;
    };
    if (!next_content(line)) throw ParseError(path + ": missing size line");
    std::istringstream ss(line);
    Index rows = 0, cols = 0;
    long long nnz = -1;
    ss >> rows >> cols;
    if (format == "coordinate") ss >> nnz;
    if (rows < 1 || cols != rows)
        throw ParseError(path + ": expected a square size line, got '" + line + "'");

    Matrix a = Matrix::Zero(rows, cols);
    if (format == "coordinate") {
        if (nnz < 0) throw ParseError(path + ": coordinate header lacks entry count");
        for (long long k = 0; k < nnz; ++k) {
            if (!next_content(line))
                throw ParseError(path + ": expected " + std::to_string(nnz) +
                                 " entries, found " + std::to_string(k));
            std::istringstream es(line);
            Index i = 0, j = 0;
            std::string tok;
            es >> i >> j >> tok;
            if (i < 1 || j < 1 || i > rows || j > cols)
                throw ParseError(path + ": entry index out of range: '" + line + "'");
            const double v = detail::parse_double(tok, path);
            a(i - 1, j - 1) = v;
            if (symmetry == "symmetric") a(j - 1, i - 1) = v;
        }
    } else {
        auto read_value = [&](const std::string& where) {
            if (!next_content(line)) throw ParseError(where + ": truncated array data");
            std::istringstream es(line);
            std::string tok;
            es >> tok;
            return detail::parse_double(tok, where);
        };
        if (symmetry == "symmetric") {
            for (Index j = 0; j < cols; ++j)
                for (Index i = j; i < rows; ++i) {
                    const double v = read_value(path);
                    a(i, j) = v;
                    a(j, i) = v;
                }
        } else {
            for (Index j = 0; j < cols; ++j)
                for (Index i = 0; i < rows; ++i) a(i, j) = read_value(path);
        }
    }
    return detail::check_and_symmetrize(a, path);
}

// ------------------------------------------------------------------------ CSV

inline void write_csv_matrix(const std::string& path, const Matrix& a) {
    auto out = detail::open_out(path);
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            if (j) out << ",";
            out << a(i, j);
        }
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

inline Matrix read_csv_matrix(const std::string& path) {
    auto in = detail::open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    Index lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        Index col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            // trim
            const auto b = cell.find_first_not_of(" \t\r");
            const auto e = cell.find_last_not_of(" \t\r");
            if (b == std::string::npos)
                throw ParseError(path + ":" + std::to_string(lineno) + ": empty cell in column " +
                                 std::to_string(col));
            row.push_back(detail::parse_double(
                cell.substr(b, e - b + 1),
                path + ":" + std::to_string(lineno) + ":col" + std::to_string(col)));
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path + ": no data rows");
    const size_t ncol = rows.front().size();
    Matrix a(static_cast<Index>(rows.size()), static_cast<Index>(ncol));
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != ncol)
            throw ParseError(path + ": ragged row " + std::to_string(i + 1));
        for (size_t j = 0; j < ncol; ++j)
            a(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
    return a;
}

inline SymMat read_sym_csv(const std::string& path) {
    return detail::check_and_symmetrize(read_csv_matrix(path), path);
}

inline void write_csv_vector(const std::string& path, const Vector& v) {
    auto out = detail::open_out(path);
    for (Index i = 0; i < v.size(); ++i) out << v[i] << "\n";
    if (!out) throw IoError("write failed: " + path);
}

inline Vector read_csv_vector(const std::string& path) {
    const Matrix a = read_csv_matrix(path);
    if (a.cols() != 1) throw ParseError(path + ": expected a single column");
    return a.col(0);
}

// Reads a symmetric matrix by extension: .mtx / .mm -> Matrix Market,
// anything else -> CSV.
inline SymMat read_sym_auto(const std::string& path) {
    const std::string ext =
        detail::lower(std::filesystem::path(path).extension().string());
    if (ext == ".mtx" || ext == ".mm") return read_sym_matrix_market(path);
    return read_sym_csv(path);
}

// ---------------------------------------------------------------- constraints

// One "i j value" triple per line (1-based, i < j), defining (A X)_k = b_k
// at entry (i, j). Lines starting with '#' are comments.
inline EntrySelector read_constraints(const std::string& path, Index n) {
    auto in = detail::open_in(path);
    std::vector<std::pair<Index, Index>> pairs;
    std::vector<double> b;
    std::string line;
    Index lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        long long i = 0, j = 0;
        std::string tok;
        if (!(ss >> i >> j >> tok))
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected 'i j value'");
        const double v =
            detail::parse_double(tok, path + ":" + std::to_string(lineno));
        if (i == j)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": diagonal entries cannot be constrained");
        if (i < 1 || j < 1 || i >= j || j > n)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": indices must satisfy 1 <= i < j <= n");
        pairs.emplace_back(static_cast<Index>(i - 1), static_cast<Index>(j - 1));
        b.push_back(v);
    }
    Vector bv(static_cast<Index>(b.size()));
    for (size_t k = 0; k < b.size(); ++k) bv[static_cast<Index>(k)] = b[k];
    return EntrySelector(n, std::move(pairs), std::move(bv));
}

inline void write_constraints(const std::string& path, const EntrySelector& sel) {
    auto out = detail::open_out(path);
    const auto& b = sel.rhs();
    for (Index k = 0; k < sel.m(); ++k) {
        const auto& [i, j] = sel.pairs()[static_cast<size_t>(k)];
        out << (i + 1) << " " << (j + 1) << " " << b[k] << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

// ----------------------------------------------------------------- truth JSON

// {"kind", "n", "labels" (or null), "edges": [[i, j, w]...], "conc_file"} with
// the concentration matrix in a Matrix Market file next to the JSON.
inline void write_truth_json(const std::string& path, const GroundTruth& truth,
                             const std::string& conc_filename) {
    nlohmann::json j;
    j["kind"] = truth.kind;
    j["n"] = truth.conc.n();
    if (truth.labels.empty())
        j["labels"] = nullptr;
    else
        j["labels"] = truth.labels;
    auto edges = nlohmann::json::array();
    for (const auto& [a, b, w] : truth.edges)
        edges.push_back({a + 1, b + 1, w});
    j["edges"] = std::move(edges);
    j["conc_file"] = conc_filename;
    auto out = detail::open_out(path);
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

inline GroundTruth read_truth_json(const std::string& path) {
    auto in = detail::open_in(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    GroundTruth t;
    t.kind = j.value("kind", "unknown");
    if (j.contains("labels") && !j["labels"].is_null())
        t.labels = j["labels"].get<std::vector<int>>();
    for (const auto& e : j.at("edges")) {
        t.edges.emplace_back(e.at(0).get<Index>() - 1, e.at(1).get<Index>() - 1,
                             e.at(2).get<double>());
    }
    const std::string conc_file = j.at("conc_file").get<std::string>();
    const auto dir = std::filesystem::path(path).parent_path();
    t.conc = read_sym_matrix_market((dir / conc_file).string());
    if (t.conc.n() != j.at("n").get<Index>())
        throw ParseError(path + ": n does not match the concentration matrix");
    return t;
}

// ------------------------------------------------------------------- exports

// Weighted edge list of the detected graph: edge (i, j) with weight
// -X_ij for every off-diagonal above the magnitude cutoff.
inline std::vector<std::tuple<Index, Index, double>> detected_edges(
    const SymMat& x, double threshold) {
    std::vector<std::tuple<Index, Index, double>> edges;
    for (Index j = 1; j < x.n(); ++j)
        for (Index i = 0; i < j; ++i)
            if (std::abs(x(i, j)) > threshold) edges.emplace_back(i, j, -x(i, j));
    return edges;
}

inline void write_edges_dot(const std::string& path,
                            const std::vector<std::tuple<Index, Index, double>>& edges,
                            Index n) {
    auto out = detail::open_out(path);
    out << "graph estimate {\n";
    for (Index i = 0; i < n; ++i) out << "  " << (i + 1) << ";\n";
    for (const auto& [i, j, w] : edges)
        out << "  " << (i + 1) << " -- " << (j + 1) << " [weight=" << w << "];\n";
    out << "}\n";
    if (!out) throw IoError("write failed: " + path);
}

inline void write_edges_csv(const std::string& path,
                            const std::vector<std::tuple<Index, Index, double>>& edges) {
    auto out = detail::open_out(path);
    out << "i,j,weight\n";
    for (const auto& [i, j, w] : edges)
        out << (i + 1) << "," << (j + 1) << "," << w << "\n";
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace cggm
