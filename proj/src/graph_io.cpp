#include "lapsparse/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "lapsparse/error.hpp"

namespace lapsparse {

namespace {

std::string at_line(std::size_t line) { return "line " + std::to_string(line); }

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < s.size()) {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos >= s.size()) break;
        std::size_t end = pos;
        while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end]))) ++end;
        tokens.push_back(s.substr(pos, end - pos));
        pos = end;
    }
    return tokens;
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if constexpr (std::is_floating_point_v<T>) {
        if (first != last && *first == '+') ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

struct EdgeCollector {
    std::size_t n = 0;
    std::vector<Edge> edges;
    std::set<EdgeKey> seen;

    void add(NodeId i, NodeId j, double w, std::size_t line) {
        if (i >= n || j >= n)
            throw Error(ErrorCode::IndexOutOfRange,
                        at_line(line) + ": node index out of range for n=" + std::to_string(n));
        if (i == j) throw Error(ErrorCode::SelfLoop, at_line(line) + ": self-loop on node " + std::to_string(i));
        if (!(w >= 0.0)) throw Error(ErrorCode::NegativeWeight, at_line(line) + ": negative weight");
        EdgeKey key = i < j ? EdgeKey{i, j} : EdgeKey{j, i};
        if (!seen.insert(key).second) throw Error(ErrorCode::DuplicateEdge, at_line(line) + ": duplicate edge");
        edges.push_back({i, j, w});
    }
};

}  // namespace

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

WeightedGraph read_edge_list(std::istream& in) {
    EdgeCollector collector;
    bool have_header = false;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;

        if (!have_header) {
            std::string header;
            for (auto t : tokens) header += t;
            if (header.size() < 3 || header.substr(0, 2) != "n=" ||
                !parse_number(std::string_view(header).substr(2), collector.n) || collector.n == 0)
                throw Error(ErrorCode::ParseError, at_line(line_no) + ": expected header 'n=<N>'");
            have_header = true;
            continue;
        }

        NodeId i = 0, j = 0;
        double w = 0.0;
        if (tokens.size() != 3 || !parse_number(tokens[0], i) || !parse_number(tokens[1], j) ||
            !parse_number(tokens[2], w))
            throw Error(ErrorCode::ParseError, at_line(line_no) + ": expected 'i j w', got '" + std::string(line) + "'");
        collector.add(i, j, w, line_no);
    }
    if (!have_header) throw Error(ErrorCode::ParseError, "missing header 'n=<N>'");
    return build_graph(collector.n, collector.edges);
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
    out << "n=" << g.node_count() << '\n';
    for (const auto& e : g.edges()) out << e.i << ' ' << e.j << ' ' << format_double(e.w) << '\n';
}

WeightedGraph read_matrix_market(std::istream& in) {
    std::string raw;
    std::size_t line_no = 0;
    if (!std::getline(in, raw)) throw Error(ErrorCode::ParseError, "empty matrix file");
    ++line_no;
    std::string lowered = raw;
    std::transform(lowered.begin(), lowered.end(), lowered.begin(), [](unsigned char c) { return std::tolower(c); });
    auto banner = split_ws(lowered);
    if (banner.size() < 5 || banner[0] != "%%matrixmarket" || banner[1] != "matrix" || banner[2] != "coordinate")
        throw Error(ErrorCode::ParseError, at_line(1) + ": expected '%%MatrixMarket matrix coordinate ...'");
    const bool pattern = banner[3] == "pattern";
    if (!pattern && banner[3] != "real" && banner[3] != "integer")
        throw Error(ErrorCode::ParseError, at_line(1) + ": unsupported field '" + std::string(banner[3]) + "'");
    if (banner[4] != "symmetric")
        throw Error(ErrorCode::ParseError, at_line(1) + ": only symmetric matrices describe undirected graphs");

    EdgeCollector collector;
    bool have_size = false;
    std::size_t expected = 0, read = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto tokens = split_ws(raw);
        if (tokens.empty() || tokens[0].front() == '%') continue;
        if (!have_size) {
            std::size_t rows = 0, cols = 0;
            if (tokens.size() != 3 || !parse_number(tokens[0], rows) || !parse_number(tokens[1], cols) ||
                !parse_number(tokens[2], expected) || rows != cols || rows == 0)
                throw Error(ErrorCode::ParseError, at_line(line_no) + ": expected square size line 'N N nnz'");
            collector.n = rows;
            have_size = true;
            continue;
        }
        std::size_t r = 0, c = 0;
        double w = 1.0;
        const std::size_t want = pattern ? 2 : 3;
        if (tokens.size() != want || !parse_number(tokens[0], r) || !parse_number(tokens[1], c) ||
            (!pattern && !parse_number(tokens[2], w)))
            throw Error(ErrorCode::ParseError, at_line(line_no) + ": malformed entry '" + raw + "'");
        if (r == 0 || c == 0)
            throw Error(ErrorCode::IndexOutOfRange, at_line(line_no) + ": indices are 1-based");
        collector.add(r - 1, c - 1, w, line_no);
        ++read;
    }
    if (!have_size) throw Error(ErrorCode::ParseError, "missing size line");
    if (read != expected)
        throw Error(ErrorCode::ParseError,
                    "expected " + std::to_string(expected) + " entries, read " + std::to_string(read));
    return build_graph(collector.n, collector.edges);
}

void write_matrix_market(std::ostream& out, const WeightedGraph& g) {
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << g.node_count() << ' ' << g.node_count() << ' ' << g.edge_count() << '\n';
    for (const auto& e : g.edges()) out << e.j + 1 << ' ' << e.i + 1 << ' ' << format_double(e.w) << '\n';
}

WeightedGraph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    try {
        return path.extension() == ".mtx" ? read_matrix_market(in) : read_edge_list(in);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.detail());
    }
}

void save_graph(const WeightedGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    if (path.extension() == ".mtx")
        write_matrix_market(out, g);
    else
        write_edge_list(out, g);
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

}  // namespace lapsparse
