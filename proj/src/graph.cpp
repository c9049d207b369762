// Copyright 2026 The nlg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nlg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "nlg/errors.hpp"
#include "nlg/parallel.hpp"

namespace nlg {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges, std::string name)
    : n_(n), edges_(std::move(edges)), name_(std::move(name)), adjacency_(n > 0 ? n : 0) {
    if (n <= 0) {
        throw DomainError("graph must have at least one vertex");
    }
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges_) {
        if (u < 0 || v < 0 || u >= n || v >= n) {
            throw DomainError("edge endpoint out of range: (" + std::to_string(u) + "," + std::to_string(v) + ")");
        }
        if (u == v) {
            throw DomainError("self-loop at vertex " + std::to_string(u));
        }
        if (!seen.insert(std::minmax(u, v)).second) {
            throw DomainError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
        }
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto &adj : adjacency_) {
        std::sort(adj.begin(), adj.end());
    }
}

bool Graph::has_edge(int u, int v) const {
    if (u < 0 || u >= n_) {
        return false;
    }
    return std::binary_search(adjacency_[u].begin(), adjacency_[u].end(), v);
}

Graph Graph::relabeled(const std::vector<int> &perm) const {
    if (static_cast<int>(perm.size()) != n_) {
        throw DomainError("permutation size mismatch");
    }
    std::vector<std::pair<int, int>> e;
    e.reserve(edges_.size());
    for (auto [u, v] : edges_) {
        e.emplace_back(perm[u], perm[v]);
    }
    return Graph(n_, std::move(e), name_);
}

uint64_t Graph::hash() const {
    std::string s = graph_to_json(*this).dump();
    return fnv1a(s.data(), s.size());
}

Graph graph_from_json(const nlohmann::json &j) {
    try {
        int n = j.at("n").get<int>();
        std::vector<std::pair<int, int>> edges;
        for (const auto &e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) {
                throw DataError("edge entries must be [u, v] pairs");
            }
            edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
        return Graph(n, std::move(edges), j.value("name", std::string()));
    } catch (const DomainError &ex) {
        throw DataError(std::string("bad graph: ") + ex.what());
    } catch (const nlohmann::json::exception &ex) {
        throw DataError(std::string("bad graph json: ") + ex.what());
    }
}

nlohmann::json graph_to_json(const Graph &g) {
    nlohmann::json edges = nlohmann::json::array();
    for (auto [u, v] : g.edges()) {
        edges.push_back({u, v});
    }
    return {{"name", g.name()}, {"n", g.n()}, {"edges", edges}};
}

Graph load_graph(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open graph file " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &ex) {
        throw DataError("cannot parse " + path + ": " + ex.what());
    }
    return graph_from_json(j);
}

Graph g14() {
    // Vertex order follows the rays
    //   e1 e2 e3 (0,1,1) (0,1,-1) (1,0,1) (1,0,-1) (1,1,0) (1,-1,0)
    //   (-1,1,1) (1,-1,1) (1,1,-1) (1,1,1)
    // padded with a zero fourth coordinate, then the apex e4.
    std::vector<std::pair<int, int>> edges{
        {0, 1},  {0, 2},  {0, 3},  {0, 4},  {0, 13}, {1, 2},  {1, 5},  {1, 6},   {1, 13},  {2, 7},
        {2, 8},  {2, 13}, {3, 4},  {3, 10}, {3, 11}, {3, 13}, {4, 9},  {4, 12},  {4, 13},  {5, 6},
        {5, 9},  {5, 11}, {5, 13}, {6, 10}, {6, 12}, {6, 13}, {7, 8},  {7, 9},   {7, 10},  {7, 13},
        {8, 11}, {8, 12}, {8, 13}, {9, 13}, {10, 13}, {11, 13}, {12, 13},
    };
    return Graph(14, std::move(edges), "G14");
}

Graph complete_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; u++) {
        for (int v = u + 1; v < n; v++) {
            edges.emplace_back(u, v);
        }
    }
    return Graph(n, std::move(edges), "K" + std::to_string(n));
}

void validate_g14(const Graph &g) {
    if (g.n() != 14) {
        throw DataError("G14 must have 14 vertices, got " + std::to_string(g.n()));
    }
    if (g.edges().size() != 37) {
        throw DataError("G14 must have 37 edges, got " + std::to_string(g.edges().size()));
    }
    auto result = classical_value(build_game(g, 4));
    if (result.value != Rational(86, 88)) {
        throw DataError("G14 classical value should be 86/88, got " + result.value.str());
    }
}

int ColoringGame::question_index(int x, int y) const {
    for (size_t i = 0; i < questions.size(); i++) {
        if (questions[i].x == x && questions[i].y == y) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

int rule_lambda(int a, int b, const Question &q, int colors) {
    if (a < 0 || b < 0 || a >= colors || b >= colors) {
        throw DomainError("color out of range");
    }
    if (q.kind == QuestionKind::Vertex) {
        return a == b ? 1 : 0;
    }
    return a != b ? 1 : 0;
}

ColoringGame build_game(const Graph &graph, int colors) {
    if (colors < 1) {
        throw DomainError("need at least one color");
    }
    if (graph.n() == 0) {
        throw DomainError("empty graph");
    }
    std::vector<Question> qs;
    qs.reserve(graph.n() + 2 * graph.edges().size());
    for (int v = 0; v < graph.n(); v++) {
        qs.push_back({QuestionKind::Vertex, v, v});
    }
    for (auto [u, v] : graph.edges()) {
        qs.push_back({QuestionKind::DirectedEdge, u, v});
        qs.push_back({QuestionKind::DirectedEdge, v, u});
    }
    return ColoringGame{graph, colors, std::move(qs)};
}

int64_t deterministic_wins(const ColoringGame &game, const std::vector<int> &alice, const std::vector<int> &bob) {
    int64_t wins = 0;
    for (const auto &q : game.questions) {
        wins += rule_lambda(alice[q.x], bob[q.y], q, game.colors);
    }
    return wins;
}

namespace {

/// Depth-first enumeration of Alice colorings in lexicographic order,
/// restricted to "first-appearance" canonical forms: relabeling colors maps
/// any f_A onto one whose colors appear as 0, 1, 2, ... and the game value
/// is invariant under a joint relabeling. The lexicographically smallest
/// member of each relabeling orbit is the canonical one, so the reported
/// optimum is still the lowest-index f_A overall.
class AliceEnumerator {
   public:
    AliceEnumerator(const ColoringGame &game) : game_(game), n_(game.graph.n()), c_(game.colors) {
        cnt_.assign(static_cast<size_t>(n_) * c_, 0);
        self_.assign(n_, -1);
        alice_.assign(n_, -1);
        deg_.resize(n_);
        for (int v = 0; v < n_; v++) {
            deg_[v] = static_cast<int>(game.graph.neighbors(v).size());
        }
    }

    void assign(int v, int color) {
        alice_[v] = color;
        self_[v] = color;
        for (int y : game_.graph.neighbors(v)) {
            cnt_[static_cast<size_t>(y) * c_ + color]++;
        }
    }
    void unassign(int v) {
        int color = alice_[v];
        for (int y : game_.graph.neighbors(v)) {
            cnt_[static_cast<size_t>(y) * c_ + color]--;
        }
        alice_[v] = -1;
        self_[v] = -1;
    }

    int64_t leaf_score() const {
        int64_t total = 0;
        for (int y = 0; y < n_; y++) {
            const int *row = &cnt_[static_cast<size_t>(y) * c_];
            int best = 0;
            for (int b = 0; b < c_; b++) {
                int s = (b == self_[y]) + deg_[y] - row[b];
                best = std::max(best, s);
            }
            total += best;
        }
        return total;
    }

    void search(int v, int max_used) {
        if (v == n_) {
            int64_t s = leaf_score();
            if (s > best_score) {
                best_score = s;
                best_alice = alice_;
            }
            return;
        }
        int limit = std::min(c_ - 1, max_used + 1);
        for (int color = 0; color <= limit; color++) {
            assign(v, color);
            search(v + 1, std::max(max_used, color));
            unassign(v);
        }
    }

    int64_t best_score = -1;
    std::vector<int> best_alice;

   private:
    const ColoringGame &game_;
    int n_;
    int c_;
    std::vector<int> cnt_;
    std::vector<int> self_;
    std::vector<int> alice_;
    std::vector<int> deg_;
};

void canonical_prefixes(int depth, int colors, std::vector<int> &cur, int max_used, std::vector<std::vector<int>> &out) {
    if (static_cast<int>(cur.size()) == depth) {
        out.push_back(cur);
        return;
    }
    int limit = std::min(colors - 1, max_used + 1);
    for (int color = 0; color <= limit; color++) {
        cur.push_back(color);
        canonical_prefixes(depth, colors, cur, std::max(max_used, color), out);
        cur.pop_back();
    }
}

}  // namespace

ClassicalResult classical_value(const ColoringGame &game, const ClassicalOptions &options) {
    const int n = game.graph.n();
    const int c = game.colors;
    if (!options.allow_large && n * std::log2(static_cast<double>(c)) > 30.0) {
        throw SizeError("classical enumeration over " + std::to_string(c) + "^" + std::to_string(n) +
                        " strategies exceeds the size guard");
    }

    std::vector<std::vector<int>> prefixes;
    std::vector<int> cur;
    canonical_prefixes(std::min(n, 5), c, cur, -1, prefixes);

    std::vector<int64_t> scores(prefixes.size(), -1);
    std::vector<std::vector<int>> alices(prefixes.size());
    parallel_for(prefixes.size(), [&](size_t i) {
        AliceEnumerator e(game);
        int max_used = -1;
        for (size_t v = 0; v < prefixes[i].size(); v++) {
            e.assign(static_cast<int>(v), prefixes[i][v]);
            max_used = std::max(max_used, prefixes[i][v]);
        }
        e.search(static_cast<int>(prefixes[i].size()), max_used);
        scores[i] = e.best_score;
        alices[i] = e.best_alice;
    });

    // Prefixes are in lexicographic order, so the first maximum is the lowest index.
    size_t best = 0;
    for (size_t i = 1; i < prefixes.size(); i++) {
        if (scores[i] > scores[best]) {
            best = i;
        }
    }

    ClassicalResult r;
    r.alice = alices[best];
    r.bob.assign(n, 0);
    for (int y = 0; y < n; y++) {
        int best_b = 0;
        int best_s = -1;
        for (int b = 0; b < c; b++) {
            int s = (b == r.alice[y]);
            for (int x : game.graph.neighbors(y)) {
                s += (b != r.alice[x]);
            }
            if (s > best_s) {
                best_s = s;
                best_b = b;
            }
        }
        r.bob[y] = best_b;
    }
    r.total = static_cast<int64_t>(game.questions.size());
    r.wins = deterministic_wins(game, r.alice, r.bob);
    r.value = Rational(r.wins, r.total);
    return r;
}

}  // namespace nlg
