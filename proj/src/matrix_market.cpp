#include "nsamg/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nsamg {

namespace {
std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}
} // namespace

SparseMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);

    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, path + ":1: empty file");
    ++lineno;

    std::istringstream hdr(line);
    std::string banner, object, format, field, symmetry;
    hdr >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix")
        throw Error(ErrorCode::ParseError, path + ":1: not a MatrixMarket matrix header");
    if (lower(format) != "coordinate")
        throw Error(ErrorCode::UnsupportedField, path + ": only coordinate format is supported");
    const std::string f = lower(field);
    if (f == "complex" || f == "pattern")
        throw Error(ErrorCode::UnsupportedField, path + ": field '" + f + "' not supported");
    if (f != "real" && f != "integer")
        throw Error(ErrorCode::UnsupportedField, path + ": unknown field '" + f + "'");
    const std::string sym = lower(symmetry);
    if (sym != "general" && sym != "symmetric")
        throw Error(ErrorCode::UnsupportedField, path + ": symmetry '" + sym + "' not supported");

    // Skip comments.
    int rows = 0, cols = 0;
    long long nnz = 0;
    for (;;) {
        if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, path + ": missing size line");
        ++lineno;
        if (!line.empty() && line[0] == '%') continue;
        std::istringstream sz(line);
        if (!(sz >> rows >> cols >> nnz))
            throw Error(ErrorCode::ParseError, path + ":" + std::to_string(lineno) + ": bad size line");
        break;
    }
    if (rows < 0 || cols < 0 || nnz < 0)
        throw Error(ErrorCode::ParseError, path + ":" + std::to_string(lineno) + ": negative size");

    std::vector<int> ti, tj;
    std::vector<double> tv;
    ti.reserve(static_cast<std::size_t>(nnz));
    tj.reserve(static_cast<std::size_t>(nnz));
    tv.reserve(static_cast<std::size_t>(nnz));
    for (long long k = 0; k < nnz; ++k) {
        if (!std::getline(in, line))
            throw Error(ErrorCode::ParseError, path + ": unexpected end of file after " + std::to_string(k) + " entries");
        ++lineno;
        std::istringstream es(line);
        int i = 0, j = 0;
        double v = 0.0;
        if (!(es >> i >> j >> v))
            throw Error(ErrorCode::ParseError, path + ":" + std::to_string(lineno) + ": bad entry line");
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw Error(ErrorCode::ParseError, path + ":" + std::to_string(lineno) + ": index out of range");
        ti.push_back(i - 1);
        tj.push_back(j - 1);
        tv.push_back(v);
        if (sym == "symmetric" && i != j) {
            ti.push_back(j - 1);
            tj.push_back(i - 1);
            tv.push_back(v);
        }
    }
    return SparseMatrix::from_triplets(rows, cols, ti, tj, tv);
}

void write_matrix_market(const SparseMatrix& A, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << A.rows() << " " << A.cols() << " " << A.nnz() << "\n";
    char buf[64];
    for (int i = 0; i < A.rows(); ++i)
        for (int k = A.row_ptr()[i]; k < A.row_ptr()[i + 1]; ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", A.values()[k]);
            out << (i + 1) << " " << (A.col_idx()[k] + 1) << " " << buf << "\n";
        }
}

} // namespace nsamg
