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

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nlg/rational.hpp"
#include "json.hpp"

namespace nlg {

/// Simple undirected graph. Edges are stored as given (u, v) pairs; the
/// constructor rejects self-loops, duplicates, and out-of-range endpoints.
class Graph {
   public:
    Graph(int n, std::vector<std::pair<int, int>> edges, std::string name = "");

    int n() const {
        return n_;
    }
    const std::vector<std::pair<int, int>> &edges() const {
        return edges_;
    }
    const std::string &name() const {
        return name_;
    }
    const std::vector<int> &neighbors(int v) const {
        return adjacency_[v];
    }
    bool has_edge(int u, int v) const;

    /// Same graph with vertex v renamed to perm[v].
    Graph relabeled(const std::vector<int> &perm) const;

    /// Stable 64-bit digest of (n, edge list, name).
    uint64_t hash() const;

   private:
    int n_;
    std::vector<std::pair<int, int>> edges_;
    std::string name_;
    std::vector<std::vector<int>> adjacency_;
};

Graph graph_from_json(const nlohmann::json &j);
nlohmann::json graph_to_json(const Graph &g);
Graph load_graph(const std::string &path);

/// The 14-vertex, 37-edge graph with a perfect quantum 4-coloring but
/// chromatic number 5: the 13-ray Yu-Oh orthogonality graph in R^3 plus an
/// apex vertex (13) joined to every other vertex.
Graph g14();
Graph complete_graph(int n);

/// Throws DataError unless g matches the bundled G14 invariants
/// (14 vertices, 37 edges, classical value 86/88 with 4 colors).
void validate_g14(const Graph &g);

enum class QuestionKind { Vertex, DirectedEdge };

struct Question {
    QuestionKind kind;
    int x;  ///< Alice's vertex
    int y;  ///< Bob's vertex
};

/// c-coloring game on a graph under the uniform question distribution.
/// Questions are ordered: every vertex (v, v) in index order, then for each
/// edge {u, v} in graph order the pair (u, v), (v, u).
struct ColoringGame {
    Graph graph;
    int colors;
    std::vector<Question> questions;

    /// pi(q); identical for every question.
    Rational weight() const {
        return Rational(1, static_cast<int64_t>(questions.size()));
    }
    /// Index of (x, y) in `questions`, or -1.
    int question_index(int x, int y) const;
};

/// 1 when answers (a, b) win question q, else 0.
int rule_lambda(int a, int b, const Question &q, int colors);

ColoringGame build_game(const Graph &graph, int colors);

struct ClassicalOptions {
    /// Permit |V| log2(c) > 30.
    bool allow_large = false;
};

struct ClassicalResult {
    Rational value;
    int64_t wins = 0;   ///< questions won by the optimal pair
    int64_t total = 0;  ///< |questions|
    std::vector<int> alice;
    std::vector<int> bob;
};

/// Exact classical value: max over deterministic (f_A, f_B). Enumerates f_A
/// and picks Bob's best color per vertex. Reports the lowest-index optimal
/// f_A (vertex 0 most significant) and the lowest optimal color per Bob vertex.
ClassicalResult classical_value(const ColoringGame &game, const ClassicalOptions &options = {});

/// Win count of a fixed deterministic strategy pair.
int64_t deterministic_wins(const ColoringGame &game, const std::vector<int> &alice, const std::vector<int> &bob);

}  // namespace nlg
