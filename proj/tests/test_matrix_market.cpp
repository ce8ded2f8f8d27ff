#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "dsm/matrix_market.hpp"
#include "dsm/problems.hpp"
#include "support.hpp"

using namespace dsm;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static std::atomic<int> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("dsmtest-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::filesystem::path file(const std::string& name) const { return path / name; }
};

void write_text(const std::filesystem::path& p, const std::string& body) {
    std::ofstream out(p);
    out << body;
}

}  // namespace

TEST_CASE("matrix round trip is entrywise exact") {
    TempDir tmp;
    const auto H = hilbert_matrix(5);
    write_matrix_market(H, tmp.file("h5.mtx"));
    const auto back = read_matrix_market(tmp.file("h5.mtx"));
    REQUIRE(back.n() == 5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(back(i, j) == H(i, j));

    const auto A = dsmtest::random_symmetric(400, 7);
    write_matrix_market(A, tmp.file("a7.mtx"));
    const auto back2 = read_matrix_market(tmp.file("a7.mtx"));
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j) CHECK(back2(i, j) == A(i, j));
}

TEST_CASE("coordinate symmetric fixture reads as hilbert(2)") {
    TempDir tmp;
    write_text(tmp.file("h2.mtx"),
               "%%MatrixMarket matrix coordinate real symmetric\n"
               "% hand-written fixture\n"
               "2 2 3\n"
               "1 1 1\n"
               "2 1 0.5\n"
               "2 2 0.33333333333333331\n");
    const auto A = read_matrix_market(tmp.file("h2.mtx"));
    const auto H = hilbert_matrix(2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(A(i, j) == H(i, j));
}

TEST_CASE("array format, both symmetric and general") {
    TempDir tmp;
    write_text(tmp.file("sym.mtx"),
               "%%MatrixMarket matrix array real symmetric\n"
               "2 2\n1\n0.5\n0.25\n");
    const auto S = read_matrix_market(tmp.file("sym.mtx"));
    CHECK(S(0, 0) == 1.0);
    CHECK(S(0, 1) == 0.5);
    CHECK(S(1, 1) == 0.25);

    write_text(tmp.file("gen.mtx"),
               "%%MatrixMarket matrix array real general\n"
               "2 2\n1\n0.5\n0.5\n0.25\n");
    const auto G = read_matrix_market(tmp.file("gen.mtx"));
    CHECK(G(0, 1) == 0.5);
}

TEST_CASE("malformed and unsupported files are rejected") {
    TempDir tmp;

    write_text(tmp.file("asym.mtx"),
               "%%MatrixMarket matrix coordinate real general\n"
               "2 2 4\n1 1 1\n1 2 0.9\n2 1 0.1\n2 2 1\n");
    CHECK_THROWS_AS(read_matrix_market(tmp.file("asym.mtx")), io_error);

    write_text(tmp.file("banner.mtx"), "MatrixMarket matrix coordinate real symmetric\n2 2 0\n");
    CHECK_THROWS_AS(read_matrix_market(tmp.file("banner.mtx")), io_error);

    write_text(tmp.file("complex.mtx"),
               "%%MatrixMarket matrix coordinate complex symmetric\n1 1 1\n1 1 1 0\n");
    CHECK_THROWS_AS(read_matrix_market(tmp.file("complex.mtx")), io_error);

    write_text(tmp.file("pattern.mtx"),
               "%%MatrixMarket matrix coordinate pattern symmetric\n1 1 1\n1 1\n");
    CHECK_THROWS_AS(read_matrix_market(tmp.file("pattern.mtx")), io_error);

    write_text(tmp.file("rect.mtx"),
               "%%MatrixMarket matrix coordinate real general\n3 2 1\n1 1 1\n");
    CHECK_THROWS_AS(read_matrix_market(tmp.file("rect.mtx")), io_error);

    write_text(tmp.file("oob.mtx"),
               "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 1\n");
    CHECK_THROWS_AS(read_matrix_market(tmp.file("oob.mtx")), io_error);

    write_text(tmp.file("short.mtx"),
               "%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n1 1 1\n");
    CHECK_THROWS_AS(read_matrix_market(tmp.file("short.mtx")), io_error);

    CHECK_THROWS_AS(read_matrix_market(tmp.file("missing.mtx")), io_error);
}

TEST_CASE("vector round trip and format autodetection") {
    TempDir tmp;
    const std::vector<double> v{1.0, -2.5, 1.0 / 3.0, 1e-15};

    write_vector(v, tmp.file("v.txt"), {"solver output", "n: 4"});
    const auto back = read_vector(tmp.file("v.txt"));
    CHECK(back == v);

    write_text(tmp.file("v.mtx"),
               "%%MatrixMarket matrix array real general\n"
               "% a vector\n"
               "3 1\n1.5\n-2\n0.125\n");
    const auto mm = read_vector(tmp.file("v.mtx"));
    CHECK(mm == std::vector<double>{1.5, -2.0, 0.125});

    write_text(tmp.file("cmt.txt"), "# leading comment\n0.5\n# interleaved\n1.5\n\n2.5\n");
    const auto cmt = read_vector(tmp.file("cmt.txt"));
    CHECK(cmt == std::vector<double>{0.5, 1.5, 2.5});

    write_text(tmp.file("bad.txt"), "0.5\nnot-a-number\n");
    CHECK_THROWS_AS(read_vector(tmp.file("bad.txt")), io_error);

    write_text(tmp.file("wide.mtx"), "%%MatrixMarket matrix array real general\n3 2\n1\n2\n3\n4\n5\n6\n");
    CHECK_THROWS_AS(read_vector(tmp.file("wide.mtx")), io_error);

    CHECK_THROWS_AS(read_vector(tmp.file("nope.txt")), io_error);
}

TEST_CASE("written matrices use the coordinate symmetric banner") {
    TempDir tmp;
    write_matrix_market(SymmetricOperator::diagonal({1.0, 0.0, 3.0}), tmp.file("d.mtx"));
    std::ifstream in(tmp.file("d.mtx"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "%%MatrixMarket matrix coordinate real symmetric");
    std::getline(in, line);
    CHECK(line == "3 3 2");  // the zero diagonal entry is not stored
}
