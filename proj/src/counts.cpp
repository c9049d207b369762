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

#include "nlg/counts.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "json.hpp"
#include "nlg/errors.hpp"

namespace nlg {

int parse_outcome(const std::string &bits) {
    if (bits.size() != 4) {
        throw DataError("malformed outcome string '" + bits + "'");
    }
    int v = 0;
    for (char ch : bits) {
        if (ch != '0' && ch != '1') {
            throw DataError("malformed outcome string '" + bits + "'");
        }
        v = 2 * v + (ch - '0');
    }
    return v;
}

std::string outcome_string(int index) {
    std::string s(4, '0');
    for (int k = 0; k < 4; k++) {
        if (index & (8 >> k)) {
            s[k] = '1';
        }
    }
    return s;
}

ParsedLabel parse_label(const std::string &label) {
    auto number = [&](const std::string &s) {
        if (s.empty() || s.size() > 6 || s.find_first_not_of("0123456789") != std::string::npos) {
            throw DataError("malformed circuit label '" + label + "'");
        }
        return std::stoi(s);
    };
    if (label.size() >= 2 && label[0] == 'v') {
        int v = number(label.substr(1));
        return {RecordKind::Vertex, v, v};
    }
    if (label.size() >= 4 && label[0] == 'e') {
        auto us = label.find('_');
        if (us == std::string::npos) {
            throw DataError("malformed circuit label '" + label + "'");
        }
        return {RecordKind::Edge, number(label.substr(1, us - 1)), number(label.substr(us + 1))};
    }
    throw DataError("malformed circuit label '" + label + "'");
}

void CountsRecord::validate() const {
    int64_t total = 0;
    for (const auto &[bits, n] : counts) {
        parse_outcome(bits);
        if (n < 0) {
            throw DataError("negative count in record " + label);
        }
        total += n;
    }
    if (total != shots) {
        throw DataError("record " + label + " counts sum to " + std::to_string(total) + ", expected " +
                        std::to_string(shots));
    }
    if (shots < 1) {
        throw DataError("record " + label + " has no shots");
    }
}

const CountsRecord *CountsDataset::find(const std::string &label) const {
    for (const auto &r : records) {
        if (r.label == label) {
            return &r;
        }
    }
    return nullptr;
}

void CountsDataset::validate() const {
    std::set<std::string> seen;
    for (const auto &r : records) {
        r.validate();
        if (!seen.insert(r.label).second) {
            throw DataError("duplicate record label " + r.label);
        }
    }
}

int64_t CountsDataset::min_shots() const {
    int64_t m = 0;
    for (const auto &r : records) {
        m = (m == 0) ? r.shots : std::min(m, r.shots);
    }
    return m;
}

void write_jsonl(std::ostream &out, const CountsDataset &d) {
    for (const auto &r : d.records) {
        nlohmann::ordered_json j;
        j["label"] = r.label;
        j["kind"] = r.kind == RecordKind::Vertex ? "vertex" : "edge";
        j["shots"] = r.shots;
        j["counts"] = r.counts;
        j["provenance"] = d.provenance;
        out << j.dump() << '\n';
    }
}

CountsDataset read_jsonl(std::istream &in) {
    CountsDataset d;
    bool all_simulated = true;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            auto j = nlohmann::json::parse(line);
            CountsRecord r;
            r.label = j.at("label").get<std::string>();
            auto kind = j.at("kind").get<std::string>();
            if (kind == "vertex") {
                r.kind = RecordKind::Vertex;
            } else if (kind == "edge") {
                r.kind = RecordKind::Edge;
            } else {
                throw DataError("unknown record kind '" + kind + "'");
            }
            if (parse_label(r.label).kind != r.kind) {
                throw DataError("label " + r.label + " does not match kind " + kind);
            }
            r.shots = j.at("shots").get<int64_t>();
            r.counts = j.at("counts").get<std::map<std::string, int64_t>>();
            all_simulated = all_simulated && j.value("provenance", std::string()) == "simulated";
            d.records.push_back(std::move(r));
        } catch (const nlohmann::json::exception &ex) {
            throw DataError("counts line " + std::to_string(lineno) + ": " + ex.what());
        }
    }
    d.provenance = (all_simulated && !d.records.empty()) ? "simulated" : "ingested";
    d.validate();
    return d;
}

CountsDataset load_counts(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open counts file " + path);
    }
    return read_jsonl(in);
}

void save_counts(const std::string &path, const CountsDataset &d) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path);
    }
    write_jsonl(out, d);
}

}  // namespace nlg
