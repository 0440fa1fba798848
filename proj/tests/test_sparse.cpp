#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nsamg/matrix_market.hpp"
#include "nsamg/problems.hpp"
#include "nsamg/rng.hpp"
#include "nsamg/sparse.hpp"

using namespace nsamg;

namespace {

SparseMatrix random_sparse(int n, double density, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> ti, tj;
    std::vector<double> tv;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i == j || rng.uniform() < density) {
                ti.push_back(i);
                tj.push_back(j);
                tv.push_back(i == j ? 2.0 + rng.uniform() : rng.uniform(-1.0, 1.0));
            }
    return SparseMatrix::from_triplets(n, n, ti, tj, tv);
}

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("from_triplets sums duplicates and drops zeros") {
    const SparseMatrix A =
        SparseMatrix::from_triplets(2, 2, {0, 0, 1, 1}, {0, 0, 1, 1}, {1.0, 2.0, 3.0, -3.0});
    CHECK(A.nnz() == 1);
    CHECK(A.at(0, 0) == 3.0);
    CHECK(A.at(1, 1) == 0.0);
}

TEST_CASE("csr invariants: strictly increasing columns, no stored zeros") {
    const SparseMatrix A = random_sparse(20, 0.2, 3);
    for (int i = 0; i < A.rows(); ++i)
        for (int k = A.row_ptr()[i] + 1; k < A.row_ptr()[i + 1]; ++k)
            CHECK(A.col_idx()[k] > A.col_idx()[k - 1]);
    for (double v : A.values()) CHECK(v != 0.0);
}

TEST_CASE("apply matches dense") {
    const SparseMatrix A = random_sparse(15, 0.3, 5);
    const DenseMatrix Ad = A.to_dense();
    Rng rng(7);
    Vector x(15);
    for (double& v : x) v = rng.normal();
    CHECK(norm2(A.apply(x) - matvec(Ad, x)) <= 1e-13);
    CHECK(norm2(A.apply_transposed(x) - matvec_transposed(Ad, x)) <= 1e-13);
}

TEST_CASE("multiply matches dense product") {
    const SparseMatrix A = random_sparse(12, 0.25, 11);
    const SparseMatrix B = random_sparse(12, 0.25, 13);
    const DenseMatrix C = multiply(A, B).to_dense();
    const DenseMatrix Cd = matmul(A.to_dense(), B.to_dense());
    CHECK((C - Cd).max_abs() <= 1e-13);
}

TEST_CASE("transpose round trip") {
    const SparseMatrix A = random_sparse(10, 0.3, 17);
    const SparseMatrix Att = A.transposed().transposed();
    CHECK((A.to_dense() - Att.to_dense()).max_abs() == 0.0);
}

TEST_CASE("matrix market: tiny identity file") {
    const auto path = temp_file("nsamg_identity.mtx");
    {
        std::ofstream out(path);
        out << "%%MatrixMarket matrix coordinate real general\n% comment line\n2 2 2\n1 1 1.0\n2 2 1.0\n";
    }
    const SparseMatrix A = read_matrix_market(path.string());
    CHECK(A.rows() == 2);
    CHECK(A.at(0, 0) == 1.0);
    CHECK(A.at(1, 1) == 1.0);
    CHECK(A.nnz() == 2);
}

TEST_CASE("matrix market: symmetric storage expands") {
    const auto path = temp_file("nsamg_sym.mtx");
    {
        std::ofstream out(path);
        out << "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 2.0\n2 1 -1.0\n";
    }
    const SparseMatrix A = read_matrix_market(path.string());
    CHECK(A.at(0, 1) == -1.0);
    CHECK(A.at(1, 0) == -1.0);
    CHECK(A.nnz() == 3);
}

TEST_CASE("matrix market: write-read round trip of the upwind matrix") {
    ProblemSpec spec;
    spec.n = 4;
    const SparseMatrix A = gen_upwind_advection(spec);
    const auto path = temp_file("nsamg_upwind.mtx");
    write_matrix_market(A, path.string());
    const SparseMatrix B = read_matrix_market(path.string());
    REQUIRE(B.rows() == A.rows());
    REQUIRE(B.nnz() == A.nnz());
    CHECK((A.to_dense() - B.to_dense()).max_abs() == 0.0);
}

TEST_CASE("matrix market: unsupported fields and parse errors") {
    const auto complex_path = temp_file("nsamg_complex.mtx");
    {
        std::ofstream out(complex_path);
        out << "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1.0 0.0\n";
    }
    CHECK_THROWS_AS(read_matrix_market(complex_path.string()), Error);

    const auto pattern_path = temp_file("nsamg_pattern.mtx");
    {
        std::ofstream out(pattern_path);
        out << "%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n";
    }
    try {
        read_matrix_market(pattern_path.string());
        FAIL("expected UnsupportedField");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnsupportedField);
    }

    const auto bad_path = temp_file("nsamg_bad.mtx");
    {
        std::ofstream out(bad_path);
        out << "%%MatrixMarket matrix coordinate real general\n2 2 1\n5 1 1.0\n";
    }
    try {
        read_matrix_market(bad_path.string());
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
    }
}
