#pragma once

// Simple undirected graphs: constructors for the families used as commuting
// factors (circulants, Cayley graphs over bit-vector groups), the H-product
// that glues factor graphs along matchings, universal adjacency matrices,
// almost-equitable partition checks, and a plain-text edge-list format.

#include "specht/core.hpp"
#include "specht/linalg.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace specht {

/// Simple graph on vertices 0..n-1. Edges are stored normalized (u < v);
/// inserting an existing edge is a no-op.
class Graph {
public:
    explicit Graph(Index order) : order_(order) {
        if (order < 1) fail(ErrorKind::InvalidInput, "Graph: order must be positive");
    }

    void add_edge(Index u, Index v) {
        if (u > v) std::swap(u, v);
        if (u == v) fail(ErrorKind::InvalidEdge, "Graph: loop at vertex " + std::to_string(u));
        if (u < 0 || v >= order_)
            fail(ErrorKind::InvalidEdge, "Graph: edge " + std::to_string(u) + "-" + std::to_string(v) +
                                             " outside order " + std::to_string(order_));
        edges_.emplace(u, v);
    }

    bool has_edge(Index u, Index v) const {
        if (u > v) std::swap(u, v);
        return edges_.count({u, v}) > 0;
    }

    Index order() const { return order_; }
    Index edge_count() const { return static_cast<Index>(edges_.size()); }
    const std::set<std::pair<Index, Index>>& edges() const { return edges_; }

    std::vector<Index> degrees() const {
        std::vector<Index> deg(static_cast<std::size_t>(order_), 0);
        for (const auto& [u, v] : edges_) {
            ++deg[static_cast<std::size_t>(u)];
            ++deg[static_cast<std::size_t>(v)];
        }
        return deg;
    }

    /// The common degree if the graph is regular, nothing otherwise.
    std::optional<Index> is_regular() const {
        auto deg = degrees();
        for (Index d : deg)
            if (d != deg[0]) return std::nullopt;
        return deg[0];
    }

    bool operator==(const Graph&) const = default;

private:
    Index order_;
    std::set<std::pair<Index, Index>> edges_;
};

inline Graph empty_graph(Index n) { return Graph(n); }

inline Graph complete(Index n) {
    Graph g(n);
    for (Index u = 0; u < n; ++u)
        for (Index v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

inline Graph path(Index n) {
    Graph g(n);
    for (Index u = 0; u + 1 < n; ++u) g.add_edge(u, u + 1);
    return g;
}

inline Graph cycle(Index n) {
    if (n < 3) fail(ErrorKind::CycleTooSmall, "cycle: need at least 3 vertices, got " + std::to_string(n));
    Graph g(n);
    for (Index u = 0; u < n; ++u) g.add_edge(u, (u + 1) % n);
    return g;
}

inline Graph from_edge_pairs(Index n, const std::vector<std::pair<Index, Index>>& pairs) {
    Graph g(n);
    for (const auto& [u, v] : pairs) g.add_edge(u, v);
    return g;
}

inline Graph disjoint_union(const Graph& a, const Graph& b) {
    Graph g(a.order() + b.order());
    for (const auto& [u, v] : a.edges()) g.add_edge(u, v);
    for (const auto& [u, v] : b.edges()) g.add_edge(a.order() + u, a.order() + v);
    return g;
}

/// Circulant graph: vertex i adjacent to (i +- s) mod n for each step s.
/// Steps must be distinct and lie in [1, n/2]; the half step on even n
/// contributes a single edge per vertex pair.
inline Graph circulant(Index n, const std::vector<Index>& steps) {
    Graph g(n);
    if (steps.empty()) fail(ErrorKind::InvalidStep, "circulant: connection set is empty");
    std::set<Index> seen;
    for (Index s : steps) {
        if (s < 1 || 2 * s > n)
            fail(ErrorKind::InvalidStep, "circulant: step " + std::to_string(s) + " outside [1, " +
                                             std::to_string(n / 2) + "]");
        if (!seen.insert(s).second)
            fail(ErrorKind::InvalidStep, "circulant: repeated step " + std::to_string(s));
        for (Index i = 0; i < n; ++i) g.add_edge(i, (i + s) % n);
    }
    return g;
}

/// Cayley graph of the group of k-bit vectors under xor: vertex x adjacent
/// to x ^ s for each connection element s. Elements are nonzero bitmasks
/// below 2^k, distinct; every element is its own inverse, so the graph is
/// well defined and |S|-regular.
inline Graph cayley_z2k(Index k, const std::vector<Index>& elements) {
    if (k < 1 || k > 20) fail(ErrorKind::InvalidInput, "cayley_z2k: k must lie in [1, 20]");
    const Index n = Index{1} << k;
    Graph g(n);
    if (elements.empty()) fail(ErrorKind::InvalidElement, "cayley_z2k: connection set is empty");
    std::set<Index> seen;
    for (Index s : elements) {
        if (s < 1 || s >= n)
            fail(ErrorKind::InvalidElement, "cayley_z2k: element " + std::to_string(s) +
                                                " outside [1, " + std::to_string(n - 1) + "]");
        if (!seen.insert(s).second)
            fail(ErrorKind::InvalidElement, "cayley_z2k: repeated element " + std::to_string(s));
        for (Index x = 0; x < n; ++x) g.add_edge(x, x ^ s);
    }
    return g;
}

/// Glue l factor graphs of common order n along H: vertex (j,i) gets global
/// index j*n + i; factor edges stay within blocks, and each H edge {j,k}
/// adds the perfect matching {(j,i),(k,i) : i < n}. Degree of (j,i) is
/// deg_{factor j}(i) + deg_H(j).
inline Graph h_product(const Graph& h, const std::vector<Graph>& factors) {
    const Index l = h.order();
    if (static_cast<Index>(factors.size()) != l)
        fail(ErrorKind::FactorCountMismatch, "h_product: H has " + std::to_string(l) + " vertices but " +
                                                 std::to_string(factors.size()) + " factors given");
    const Index n = factors[0].order();
    for (std::size_t j = 1; j < factors.size(); ++j)
        if (factors[j].order() != n)
            fail(ErrorKind::OrderMismatch, "h_product: factor " + std::to_string(j) + " has order " +
                                               std::to_string(factors[j].order()) + ", expected " +
                                               std::to_string(n));
    Graph g(l * n);
    for (Index j = 0; j < l; ++j)
        for (const auto& [u, v] : factors[static_cast<std::size_t>(j)].edges())
            g.add_edge(j * n + u, j * n + v);
    for (const auto& [j, k] : h.edges())
        for (Index i = 0; i < n; ++i) g.add_edge(j * n + i, k * n + i);
    return g;
}

inline Index connected_component_count(const Graph& g) {
    const Index n = g.order();
    std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
    for (const auto& [u, v] : g.edges()) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    Index components = 0;
    std::vector<Index> stack;
    for (Index start = 0; start < n; ++start) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        ++components;
        stack.push_back(start);
        seen[static_cast<std::size_t>(start)] = true;
        while (!stack.empty()) {
            Index v = stack.back();
            stack.pop_back();
            for (Index w : adj[static_cast<std::size_t>(v)])
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = true;
                    stack.push_back(w);
                }
        }
    }
    return components;
}

template <typename Scalar = double>
DenseMatrix<Scalar> adjacency_matrix(const Graph& g) {
    DenseMatrix<Scalar> a = DenseMatrix<Scalar>::Zero(g.order(), g.order());
    for (const auto& [u, v] : g.edges()) {
        a(u, v) = Scalar{1};
        a(v, u) = Scalar{1};
    }
    return a;
}

/// Coefficients of alpha*A + beta*D + gamma*I + eta*J.
struct UniversalParams {
    double alpha;
    double beta;
    double gamma;
    double eta;
};

inline constexpr UniversalParams kAdjacencyParams{1.0, 0.0, 0.0, 0.0};
inline constexpr UniversalParams kLaplacianParams{-1.0, 1.0, 0.0, 0.0};
inline constexpr UniversalParams kSignlessLaplacianParams{1.0, 1.0, 0.0, 0.0};
inline constexpr UniversalParams kSeidelParams{-2.0, 0.0, -1.0, 1.0};

/// alpha*A + beta*D + gamma*I + eta*J, assembled so mirrored entries go
/// through identical arithmetic and the result is exactly symmetric.
inline SymMatrix universal_matrix(const Graph& g, const UniversalParams& p) {
    const Index n = g.order();
    Matrix m = Matrix::Constant(n, n, p.eta);
    auto deg = g.degrees();
    for (Index i = 0; i < n; ++i) m(i, i) += p.gamma + p.beta * static_cast<double>(deg[static_cast<std::size_t>(i)]);
    for (const auto& [u, v] : g.edges()) {
        m(u, v) += p.alpha;
        m(v, u) += p.alpha;
    }
    return SymMatrix(std::move(m));
}

/// Partition of the vertex set into nonempty cells.
using Partition = std::vector<std::vector<Index>>;

namespace detail {

/// Cell label per vertex; NotAPartition unless cells cover 0..n-1 exactly once.
inline std::vector<Index> partition_labels(const Graph& g, const Partition& cells) {
    if (cells.empty()) fail(ErrorKind::NotAPartition, "partition has no cells");
    std::vector<Index> label(static_cast<std::size_t>(g.order()), -1);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (cells[c].empty()) fail(ErrorKind::NotAPartition, "cell " + std::to_string(c) + " is empty");
        for (Index v : cells[c]) {
            if (v < 0 || v >= g.order())
                fail(ErrorKind::NotAPartition, "vertex " + std::to_string(v) + " outside graph order " +
                                                   std::to_string(g.order()));
            if (label[static_cast<std::size_t>(v)] != -1)
                fail(ErrorKind::NotAPartition, "vertex " + std::to_string(v) + " listed twice");
            label[static_cast<std::size_t>(v)] = static_cast<Index>(c);
        }
    }
    for (Index v = 0; v < g.order(); ++v)
        if (label[static_cast<std::size_t>(v)] == -1)
            fail(ErrorKind::NotAPartition, "vertex " + std::to_string(v) + " not covered");
    return label;
}

}  // namespace detail

/// If every vertex of cell a has the same number of neighbors in cell b for
/// all a != b, returns that count matrix (diagonal fixed at zero); otherwise
/// nothing. Within-cell degrees are unconstrained.
inline std::optional<DenseMatrix<Index>> almost_equitable_degrees(const Graph& g, const Partition& cells) {
    auto label = detail::partition_labels(g, cells);
    const Index c = static_cast<Index>(cells.size());

    std::vector<std::vector<Index>> adj(static_cast<std::size_t>(g.order()));
    for (const auto& [u, v] : g.edges()) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }

    DenseMatrix<Index> d = DenseMatrix<Index>::Zero(c, c);
    for (Index a = 0; a < c; ++a) {
        std::vector<Index> counts(static_cast<std::size_t>(c), 0);
        bool first = true;
        for (Index v : cells[static_cast<std::size_t>(a)]) {
            std::vector<Index> mine(static_cast<std::size_t>(c), 0);
            for (Index w : adj[static_cast<std::size_t>(v)]) ++mine[static_cast<std::size_t>(label[static_cast<std::size_t>(w)])];
            mine[static_cast<std::size_t>(a)] = 0;  // within-cell count does not matter
            if (first) {
                counts = mine;
                first = false;
            } else if (mine != counts) {
                return std::nullopt;
            }
        }
        for (Index b = 0; b < c; ++b)
            if (b != a) d(a, b) = counts[static_cast<std::size_t>(b)];
    }
    return d;
}

inline bool is_almost_equitable(const Graph& g, const Partition& cells) {
    return almost_equitable_degrees(g, cells).has_value();
}

// Edge-list text format: first non-comment line is the order n, every later
// non-comment line is an edge "u v" with 0 <= u < v < n. '#' starts a
// comment, blank lines are skipped, CRLF is tolerated, duplicates rejected.

namespace detail {

inline std::optional<Index> parse_index(std::string_view token) {
    Index value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
    return value;
}

inline std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

}  // namespace detail

inline Graph parse_edge_list(const std::string& text, const std::string& name) {
    std::optional<Graph> g;
    std::size_t pos = 0;
    Index line_no = 0;
    while (pos <= text.size()) {
        ++line_no;
        std::size_t eol = text.find('\n', pos);
        std::string_view line(text.data() + pos, (eol == std::string::npos ? text.size() : eol) - pos);
        pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;

        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tokens = detail::tokenize(line);
        if (tokens.empty()) continue;

        const std::string at = name + ":" + std::to_string(line_no) + ": ";
        if (!g) {
            auto n = detail::parse_index(tokens[0]);
            if (tokens.size() != 1 || !n || *n < 1)
                fail(ErrorKind::Parse, at + "order line must be a single positive integer");
            g.emplace(*n);
            continue;
        }
        if (tokens.size() != 2) fail(ErrorKind::Parse, at + "edge line must be two vertex indices");
        auto u = detail::parse_index(tokens[0]);
        auto v = detail::parse_index(tokens[1]);
        if (!u || !v) fail(ErrorKind::Parse, at + "edge line must be two vertex indices");
        if (*u < 0 || *u >= *v || *v >= g->order())
            fail(ErrorKind::Parse, at + "edge endpoints must satisfy 0 <= u < v < " +
                                       std::to_string(g->order()));
        if (g->has_edge(*u, *v)) fail(ErrorKind::Parse, at + "duplicate edge " + std::to_string(*u) +
                                                            " " + std::to_string(*v));
        g->add_edge(*u, *v);
    }
    if (!g) fail(ErrorKind::Parse, name + ":" + std::to_string(line_no) + ": missing order line");
    return *g;
}

inline Graph read_edge_list(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + file + " for reading");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) fail(ErrorKind::Io, "read failure on " + file);
    return parse_edge_list(text, file);
}

inline void write_edge_list(const Graph& g, const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot open " + file + " for writing");
    out << g.order() << "\n";
    for (const auto& [u, v] : g.edges()) out << u << " " << v << "\n";
    out.flush();
    if (!out) fail(ErrorKind::Io, "write failure on " + file);
}

}  // namespace specht
