#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sasim/matrix.hpp"

using namespace sasim;

TEST_CASE("DenseMatrix construction, indexing and equality") {
    DenseMatrix m(2, 3, {1, 2, 3, 4, 5, 6});
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m.size() == 6);
    CHECK(m.at(0, 0) == 1.0f);
    CHECK(m.at(0, 2) == 3.0f);
    CHECK(m.at(1, 0) == 4.0f);
    CHECK(m.at(1, 2) == 6.0f);

    DenseMatrix same(2, 3, {1, 2, 3, 4, 5, 6});
    DenseMatrix other(3, 2, {1, 2, 3, 4, 5, 6});
    CHECK(m == same);
    CHECK(m != other);

    m.at(1, 1) = 9.0f;
    CHECK(m.at(1, 1) == 9.0f);
    CHECK(m != same);
}

TEST_CASE("zero-argument constructor gives an empty matrix") {
    DenseMatrix m;
    CHECK(m.rows() == 0);
    CHECK(m.cols() == 0);
    CHECK(m.size() == 0);
}

TEST_CASE("measure_sparsity counts exact zeros") {
    DenseMatrix m(2, 3, {0, 1, 0, 0, 2, 3});
    Sparsity s = measure_sparsity(m);
    CHECK(s.zero_count == 3);
    CHECK(s.total == 6);
    CHECK(s.fraction() == doctest::Approx(0.5));
}

TEST_CASE("gemm_ref computes the hand-checked product") {
    DenseMatrix w(2, 3, {1, 2, 3, 4, 5, 6});
    DenseMatrix x(3, 2, {7, 8, 9, 10, 11, 12});
    DenseMatrix p = gemm_ref(w, x);
    CHECK(p.rows() == 2);
    CHECK(p.cols() == 2);
    CHECK(p.at(0, 0) == 58.0f);
    CHECK(p.at(0, 1) == 64.0f);
    CHECK(p.at(1, 0) == 139.0f);
    CHECK(p.at(1, 1) == 154.0f);
}

TEST_CASE("gemm_ref accumulates in double precision before rounding") {
    // In single-precision accumulation (1e8 + 1) collapses back to 1e8 and
    // the final result would be 0; the 64-bit accumulator keeps the 1.
    DenseMatrix w(1, 3, {1e8f, 1.0f, -1e8f});
    DenseMatrix x(3, 1, {1, 1, 1});
    DenseMatrix p = gemm_ref(w, x);
    CHECK(p.at(0, 0) == 1.0f);
}

TEST_CASE("gemm_ref rejects mismatched inner dimensions") {
    DenseMatrix w(2, 3, {1, 2, 3, 4, 5, 6});
    DenseMatrix x(2, 2, {1, 2, 3, 4});
    CHECK_THROWS_AS((void)gemm_ref(w, x), std::invalid_argument);
}
