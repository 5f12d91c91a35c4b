#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "lapsparse/error.hpp"
#include "lapsparse/graph_io.hpp"
#include "oracles.hpp"

using namespace lapsparse;

namespace {

ErrorCode parse_error(const std::string& text, std::string* message = nullptr) {
    std::istringstream in(text);
    try {
        read_edge_list(in);
    } catch (const Error& e) {
        if (message) *message = e.what();
        return e.code();
    }
    FAIL("expected a parse failure");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("edge list parsing") {
    std::istringstream in("# sample\nn=3\n0 1 0.5   # first\n\n2 1 1e-3\n");
    auto g = read_edge_list(in);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.weight(1, 2) == 1e-3);

    std::string msg;
    CHECK(parse_error("n=3\na b c\n", &msg) == ErrorCode::ParseError);
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(parse_error("n=3\n0 5 1.0\n", &msg) == ErrorCode::IndexOutOfRange);
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(parse_error("0 1 1.0\n") == ErrorCode::ParseError);
    CHECK(parse_error("n=3\n0 1\n") == ErrorCode::ParseError);
    CHECK(parse_error("n=3\n0 1 1\n1 0 2\n") == ErrorCode::DuplicateEdge);
    CHECK(parse_error("n=3\n1 1 1\n") == ErrorCode::SelfLoop);
    CHECK(parse_error("n=3\n0 1 -2\n") == ErrorCode::NegativeWeight);
}

TEST_CASE("save/load round trip is exact") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> tiny(-300, 300);
    const auto dir = std::filesystem::temp_directory_path() / "lapsparse_io_test";
    std::filesystem::create_directories(dir);
    for (int t = 0; t < 20; ++t) {
        auto base = oracle::random_connected(3 + t, 0.5, rng);
        std::vector<Edge> edges(base.edges().begin(), base.edges().end());
        for (auto& e : edges) e.w = std::pow(10.0, tiny(rng) / 10.0) * e.w;
        auto g = build_graph(base.node_count(), edges);
        for (const char* name : {"g.txt", "g.mtx"}) {
            save_graph(g, dir / name);
            CHECK(load_graph(dir / name) == g);
        }
    }
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(load_graph("/nonexistent/file.txt"), Error);
}

TEST_CASE("matrix market format") {
    std::istringstream in(
        "%%MatrixMarket matrix coordinate real symmetric\n% comment\n3 3 2\n2 1 0.5\n3 2 2\n");
    auto g = read_matrix_market(in);
    CHECK(g.weight(0, 1) == 0.5);
    CHECK(g.weight(1, 2) == 2.0);

    std::ostringstream out;
    write_matrix_market(out, g);
    CHECK(out.str() == "%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n2 1 0.5\n3 2 2\n");

    std::istringstream general("%%MatrixMarket matrix coordinate real general\n2 2 1\n2 1 1\n");
    CHECK_THROWS_AS(read_matrix_market(general), Error);
    std::istringstream count("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n2 1 1\n");
    CHECK_THROWS_AS(read_matrix_market(count), Error);
    std::istringstream pattern("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 1\n3 1\n");
    CHECK(read_matrix_market(pattern).weight(0, 2) == 1.0);
}

TEST_CASE("format_double is shortest round trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(3.0) == "3");
    const double odd = 0.1 + 0.2;
    CHECK(std::stod(format_double(odd)) == odd);
}
