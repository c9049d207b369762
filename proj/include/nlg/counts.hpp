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
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace nlg {

enum class RecordKind { Vertex, Edge };

/// 4-character outcome string "q0q1q2q3" to index 8q0+4q1+2q2+q3.
/// Throws DataError on anything else.
int parse_outcome(const std::string &bits);
std::string outcome_string(int index);

/// Alice's and Bob's colors from an outcome index.
inline int alice_color(int index) {
    return index >> 2;
}
inline int bob_color(int index) {
    return index & 3;
}

/// "v5" -> (Vertex, 5, 5); "e3_7" -> (Edge, 3, 7).
struct ParsedLabel {
    RecordKind kind;
    int x;
    int y;
};
ParsedLabel parse_label(const std::string &label);

struct CountsRecord {
    std::string label;
    RecordKind kind = RecordKind::Vertex;
    int64_t shots = 0;
    std::map<std::string, int64_t> counts;

    /// Outcome strings well formed, counts non-negative, sum equal to shots.
    void validate() const;
};

struct CountsDataset {
    std::vector<CountsRecord> records;
    std::string provenance = "simulated";  ///< "simulated" or "ingested"

    const CountsRecord *find(const std::string &label) const;
    /// Validates every record and label uniqueness.
    void validate() const;
    int64_t min_shots() const;
};

void write_jsonl(std::ostream &out, const CountsDataset &d);
CountsDataset read_jsonl(std::istream &in);
CountsDataset load_counts(const std::string &path);
void save_counts(const std::string &path, const CountsDataset &d);

}  // namespace nlg
