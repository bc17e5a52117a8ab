#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "lpm/io.hpp"
#include "lpm/rng.hpp"

using namespace lpm;

TEST_SUITE("io") {

TEST_CASE("csv round trip is bit exact") {
    RngStream rng(239);
    Matrix m(17, 3);
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal() * std::pow(10.0, (int)rng.uniform_index(20) - 10);
    m(0, 0) = 0.0;
    m(1, 1) = -0.0;
    m(2, 2) = 1e-300;

    const Matrix back = matrix_from_csv(matrix_to_csv(m));
    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.cols() == m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) CHECK(back(i, j) == m(i, j));
}

TEST_CASE("header handling and line endings") {
    Matrix m(2, 2);
    m << 1, 2, 3, 4;
    const std::string text = matrix_to_csv(m, true);
    CHECK(text.rfind("c0,c1\r\n", 0) == 0);
    CHECK(text.find("\r\n") != std::string::npos);
    const Matrix back = matrix_from_csv(text, true);
    CHECK(back == m);
    // Plain LF input parses too.
    const Matrix lf = matrix_from_csv("1,2\n3,4\n");
    CHECK(lf == m);
}

TEST_CASE("malformed input throws") {
    CHECK_THROWS_AS(matrix_from_csv("1,2\n3\n"), InvalidInput);
    CHECK_THROWS_AS(matrix_from_csv("1,abc\n"), InvalidInput);
    CHECK_THROWS_AS(matrix_from_csv(""), InvalidInput);
    CHECK_THROWS_AS(matrix_from_csv("c0,c1\r\n", true), InvalidInput);
}

TEST_CASE("file round trip") {
    namespace fs = std::filesystem;
    const auto path = (fs::temp_directory_path() / "lpm_io_test.csv").string();
    Matrix m(3, 2);
    m << 0.1, -2.5e10, 3.14159, 4, 5, 6;
    write_csv(path, m);
    const Matrix back = read_csv(path);
    CHECK(back == m);
    std::remove(path.c_str());
    CHECK_THROWS(read_csv(path));
    CHECK_THROWS(write_csv("/nonexistent_dir_zzz/out.csv", m));
}

}  // TEST_SUITE
