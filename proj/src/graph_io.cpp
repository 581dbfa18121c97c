#include "ropm/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <random>
#include <sstream>
#include <unordered_set>
#include <vector>

namespace ropm {

namespace {

std::string kind_name(DimacsError::Kind kind) {
    switch (kind) {
        case DimacsError::Kind::missing_problem_line: return "missing problem line";
        case DimacsError::Kind::malformed_problem_line: return "malformed problem line";
        case DimacsError::Kind::duplicate_problem_line: return "duplicate problem line";
        case DimacsError::Kind::malformed_edge_line: return "malformed edge line";
        case DimacsError::Kind::vertex_out_of_range: return "vertex index out of range";
        case DimacsError::Kind::self_loop: return "self-loop";
        case DimacsError::Kind::unknown_line: return "unknown line type";
    }
    return "dimacs error";
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

bool parse_uint(std::string_view token, std::uint64_t& value) {
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc{} && ptr == last;
}

}  // namespace

DimacsError::DimacsError(Kind kind, std::size_t line, const std::string& detail)
    : std::runtime_error(line > 0 ? "dimacs line " + std::to_string(line) + ": " +
                                        kind_name(kind) + (detail.empty() ? "" : " (" + detail + ")")
                                  : "dimacs: " + kind_name(kind) +
                                        (detail.empty() ? "" : " (" + detail + ")")),
      kind_(kind),
      line_(line) {}

Graph parse_dimacs(std::istream& in, DimacsDiagnostics* diag) {
    using Kind = DimacsError::Kind;
    bool have_header = false;
    std::uint64_t n = 0;
    std::uint64_t declared = 0;
    std::vector<Edge> edges;
    std::unordered_set<std::uint64_t> seen;
    std::size_t duplicates = 0;

    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto tokens = split(raw);
        if (tokens.empty() || tokens[0] == "c") continue;
        if (tokens[0] == "p") {
            if (have_header) throw DimacsError(Kind::duplicate_problem_line, lineno, "");
            // "p col" appears in some published files alongside "p edge"
            if (tokens.size() != 4 || (tokens[1] != "edge" && tokens[1] != "col") ||
                !parse_uint(tokens[2], n) || !parse_uint(tokens[3], declared) || n == 0 ||
                n > 0xFFFFFFFFull) {
                throw DimacsError(Kind::malformed_problem_line, lineno, raw);
            }
            have_header = true;
            continue;
        }
        if (tokens[0] == "e") {
            if (!have_header) throw DimacsError(Kind::missing_problem_line, lineno, "edge before header");
            std::uint64_t a = 0;
            std::uint64_t b = 0;
            if (tokens.size() != 3 || !parse_uint(tokens[1], a) || !parse_uint(tokens[2], b)) {
                throw DimacsError(Kind::malformed_edge_line, lineno, raw);
            }
            if (a == 0 || b == 0 || a > n || b > n) {
                throw DimacsError(Kind::vertex_out_of_range, lineno,
                                  std::to_string(a) + " " + std::to_string(b) + " with n=" +
                                      std::to_string(n));
            }
            if (a == b) throw DimacsError(Kind::self_loop, lineno, "vertex " + std::to_string(a));
            auto u = static_cast<Vertex>(std::min(a, b) - 1);
            auto v = static_cast<Vertex>(std::max(a, b) - 1);
            if (!seen.insert((static_cast<std::uint64_t>(u) << 32) | v).second) {
                ++duplicates;
                continue;
            }
            edges.push_back({u, v});
            continue;
        }
        throw DimacsError(Kind::unknown_line, lineno, std::string(tokens[0]));
    }
    if (!have_header) throw DimacsError(Kind::missing_problem_line, 0, "");

    if (diag != nullptr) {
        diag->declared_edges = declared;
        diag->duplicate_edges = duplicates;
        diag->edge_count_mismatch = edges.size() != declared;
    }
    return Graph(static_cast<std::size_t>(n), std::move(edges));
}

Graph parse_dimacs_string(const std::string& text, DimacsDiagnostics* diag) {
    std::istringstream in(text);
    return parse_dimacs(in, diag);
}

Graph read_dimacs_file(const std::filesystem::path& path, DimacsDiagnostics* diag) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return parse_dimacs(in, diag);
}

void write_dimacs(std::ostream& out, const Graph& graph, const std::string& comment) {
    if (!comment.empty()) {
        std::istringstream lines(comment);
        std::string line;
        while (std::getline(lines, line)) out << "c " << line << '\n';
    }
    out << "p edge " << graph.num_vertices() << ' ' << graph.num_edges() << '\n';
    for (const Edge& e : graph.edges()) out << "e " << e.u + 1 << ' ' << e.v + 1 << '\n';
}

std::string write_dimacs_string(const Graph& graph, const std::string& comment) {
    std::ostringstream out;
    write_dimacs(out, graph, comment);
    return out.str();
}

PlantedInstance gen_planted(std::size_t n, std::size_t m, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("gen_planted: k must be >= 2");
    if (n < static_cast<std::size_t>(k)) throw std::invalid_argument("gen_planted: need n >= k");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> color(0, k - 1);
    Coloring planted;
    planted.num_phases = k;
    planted.spins.resize(n);
    std::vector<std::uint64_t> class_size(static_cast<std::size_t>(k), 0);
    for (auto& s : planted.spins) {
        s = color(rng);
        ++class_size[static_cast<std::size_t>(s)];
    }

    std::uint64_t mono = 0;
    for (auto c : class_size) mono += c * (c - 1) / 2;
    const std::uint64_t available = static_cast<std::uint64_t>(n) * (n - 1) / 2 - mono;
    if (m > available) {
        throw std::invalid_argument("gen_planted: " + std::to_string(m) + " edges requested but only " +
                                    std::to_string(available) +
                                    " bichromatic pairs exist under the planted coloring");
    }

    std::vector<Edge> edges;
    edges.reserve(m);
    if (2 * m <= available) {
        std::unordered_set<std::uint64_t> chosen;
        chosen.reserve(2 * m);
        std::uniform_int_distribution<std::size_t> vertex(0, n - 1);
        while (edges.size() < m) {
            auto a = static_cast<Vertex>(vertex(rng));
            auto b = static_cast<Vertex>(vertex(rng));
            if (planted.spins[a] == planted.spins[b]) continue;
            if (a > b) std::swap(a, b);
            if (chosen.insert((static_cast<std::uint64_t>(a) << 32) | b).second) edges.push_back({a, b});
        }
    } else {
        // dense request: list every bichromatic pair and take a random prefix
        std::vector<Edge> pool;
        pool.reserve(available);
        for (Vertex a = 0; a < n; ++a) {
            for (Vertex b = a + 1; b < n; ++b) {
                if (planted.spins[a] != planted.spins[b]) pool.push_back({a, b});
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
            std::swap(pool[i], pool[pick(rng)]);
        }
        edges.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
    }
    std::sort(edges.begin(), edges.end());

    return {Graph(n, std::move(edges)), std::move(planted), k, seed};
}

nlohmann::json planted_to_json(const PlantedInstance& inst) {
    return {{"n", inst.graph.num_vertices()},
            {"m", inst.graph.num_edges()},
            {"k", inst.k},
            {"seed", inst.seed},
            {"planted", inst.planted.spins}};
}

}  // namespace ropm
