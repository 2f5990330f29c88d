#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "mftr/common.hpp"

namespace mftr {

// ---------- raw dataset records ----------

struct RawTool {
    std::string id;
    std::string source_tag;
    nlohmann::json doc;  // free-form documentation blob (string or structured)

    bool operator==(const RawTool&) const = default;
};

struct Query {
    std::string id;
    std::string text;
    std::vector<std::pair<std::string, std::string>> turns;  // (role, utterance)

    bool operator==(const Query&) const = default;
};

// Relevance judgments, binary after normalization: any positive judged grade
// counts as relevant, zero-grade lines are validated then dropped.
struct Qrels {
    std::map<std::string, std::set<std::string>> by_query;

    std::size_t pair_count() const {
        std::size_t n = 0;
        for (const auto& [_, tools] : by_query) n += tools.size();
        return n;
    }
    const std::set<std::string>& relevant(const std::string& query_id) const {
        static const std::set<std::string> empty;
        auto it = by_query.find(query_id);
        return it == by_query.end() ? empty : it->second;
    }
    bool is_relevant(const std::string& query_id, const std::string& tool_id) const {
        auto it = by_query.find(query_id);
        return it != by_query.end() && it->second.count(tool_id) > 0;
    }

    bool operator==(const Qrels&) const = default;
};

struct Dataset {
    std::string name;
    std::vector<RawTool> tools;
    std::vector<Query> queries;
    Qrels qrels;
    std::vector<std::string> warnings;  // non-fatal findings from loading

    const RawTool* find_tool(const std::string& id) const {
        for (const auto& t : tools)
            if (t.id == id) return &t;
        return nullptr;
    }

    bool operator==(const Dataset& other) const {
        return name == other.name && tools == other.tools && queries == other.queries &&
               qrels == other.qrels;
    }
};

// ---------- helpers ----------

inline bool doc_is_empty(const nlohmann::json& doc) {
    if (doc.is_null()) return true;
    if (doc.is_string()) return doc.get<std::string>().empty();
    if (doc.is_object() || doc.is_array()) return doc.empty();
    return false;
}

inline std::string flatten_turns(const std::vector<std::pair<std::string, std::string>>& turns) {
    std::vector<std::string> lines;
    lines.reserve(turns.size());
    for (const auto& [role, utterance] : turns) lines.push_back(role + ": " + utterance);
    return join(lines, "\n");
}

// ---------- validation ----------

inline void validate(const Dataset& ds) {
    std::set<std::string> tool_ids;
    for (const auto& t : ds.tools) {
        if (t.id.empty()) throw Error(ErrorKind::validation, ds.name + ": tool with empty id");
        if (doc_is_empty(t.doc))
            throw Error(ErrorKind::validation, ds.name + ": tool '" + t.id + "' has empty doc");
        if (!tool_ids.insert(t.id).second)
            throw Error(ErrorKind::validation, ds.name + ": duplicate tool id '" + t.id + "'");
    }
    std::set<std::string> query_ids;
    for (const auto& q : ds.queries) {
        if (q.id.empty()) throw Error(ErrorKind::validation, ds.name + ": query with empty id");
        if (q.text.empty())
            throw Error(ErrorKind::validation, ds.name + ": query '" + q.id + "' has empty text");
        if (!query_ids.insert(q.id).second)
            throw Error(ErrorKind::validation, ds.name + ": duplicate query id '" + q.id + "'");
    }
    for (const auto& [qid, tools] : ds.qrels.by_query) {
        if (!query_ids.count(qid))
            throw Error(ErrorKind::validation,
                        ds.name + ": qrel references unknown query id '" + qid + "'");
        for (const auto& tid : tools) {
            if (!tool_ids.count(tid))
                throw Error(ErrorKind::validation,
                            ds.name + ": qrel references unknown tool id '" + tid + "'");
        }
    }
    for (const auto& q : ds.queries) {
        auto it = ds.qrels.by_query.find(q.id);
        if (it == ds.qrels.by_query.end() || it->second.empty())
            throw Error(ErrorKind::validation,
                        ds.name + ": query '" + q.id + "' has no relevant tool");
    }
}

// ---------- loading ----------

namespace detail {

inline nlohmann::json parse_jsonl_line(const std::filesystem::path& file, std::size_t lineno,
                                       const std::string& line) {
    try {
        return nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse,
                    file.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
}

}  // namespace detail

// Loads tools.jsonl, queries.jsonl and qrels.tsv from a dataset directory.
// `format` names the on-disk layout; "jsonl" is the only one defined.
inline Dataset load_dataset(const std::filesystem::path& dir, const std::string& name = "",
                            const std::string& format = "jsonl") {
    if (format != "jsonl")
        throw Error(ErrorKind::config, "unknown dataset format '" + format + "'");
    if (!std::filesystem::exists(dir))
        throw Error(ErrorKind::config, "dataset directory not found: " + dir.string());

    Dataset ds;
    ds.name = name.empty() ? dir.filename().string() : name;

    const auto tools_path = dir / "tools.jsonl";
    const auto queries_path = dir / "queries.jsonl";
    const auto qrels_path = dir / "qrels.tsv";
    for (const auto& p : {tools_path, queries_path, qrels_path}) {
        if (!std::filesystem::exists(p))
            throw Error(ErrorKind::config, "missing dataset file: " + p.string());
    }

    {
        std::istringstream in(read_file(tools_path));
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (trim(line).empty()) continue;
            nlohmann::json j = detail::parse_jsonl_line(tools_path, lineno, line);
            RawTool t;
            t.id = j.value("id", "");
            t.source_tag = ds.name;
            if (j.contains("doc")) t.doc = j.at("doc");
            ds.tools.push_back(std::move(t));
        }
    }
    {
        std::istringstream in(read_file(queries_path));
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (trim(line).empty()) continue;
            nlohmann::json j = detail::parse_jsonl_line(queries_path, lineno, line);
            Query q;
            q.id = j.value("id", "");
            q.text = j.value("text", "");
            if (j.contains("turns")) {
                for (const auto& turn : j.at("turns")) {
                    if (!turn.is_array() || turn.size() != 2)
                        throw Error(ErrorKind::parse, queries_path.string() + ":" +
                                                          std::to_string(lineno) +
                                                          ": turn must be [role, utterance]");
                    q.turns.emplace_back(turn.at(0).get<std::string>(),
                                         turn.at(1).get<std::string>());
                }
            }
            // multi-turn queries flatten to one retrievable text
            if (!q.turns.empty()) q.text = flatten_turns(q.turns);
            ds.queries.push_back(std::move(q));
        }
    }
    {
        std::istringstream in(read_file(qrels_path));
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (trim(line).empty()) continue;
            auto cols = split_on(line, "\t");
            if (cols.size() != 3)
                throw Error(ErrorKind::parse, qrels_path.string() + ":" + std::to_string(lineno) +
                                                  ": expected query_id<TAB>tool_id<TAB>relevance");
            long rel = 0;
            try {
                rel = std::stol(cols[2]);
            } catch (const std::exception&) {
                throw Error(ErrorKind::parse, qrels_path.string() + ":" + std::to_string(lineno) +
                                                  ": relevance not an integer: '" + cols[2] + "'");
            }
            if (rel < 0)
                throw Error(ErrorKind::parse, qrels_path.string() + ":" + std::to_string(lineno) +
                                                  ": negative relevance");
            if (rel > 0) ds.qrels.by_query[cols[0]].insert(cols[1]);
        }
    }

    // exact-text duplicate queries are flagged, never silently removed
    std::map<std::string, std::string> text_seen;
    for (const auto& q : ds.queries) {
        auto [it, fresh] = text_seen.emplace(q.text, q.id);
        if (!fresh)
            ds.warnings.push_back("duplicate query text: '" + it->second + "' and '" + q.id + "'");
    }

    validate(ds);
    return ds;
}

inline void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::string out;
        for (const auto& t : ds.tools) {
            out += nlohmann::json{{"id", t.id}, {"doc", t.doc}}.dump();
            out += "\n";
        }
        write_file_atomic(dir / "tools.jsonl", out);
    }
    {
        std::string out;
        for (const auto& q : ds.queries) {
            nlohmann::json j{{"id", q.id}, {"text", q.text}};
            if (!q.turns.empty()) {
                nlohmann::json turns = nlohmann::json::array();
                for (const auto& [role, utt] : q.turns)
                    turns.push_back(nlohmann::json::array({role, utt}));
                j["turns"] = turns;
            }
            out += j.dump();
            out += "\n";
        }
        write_file_atomic(dir / "queries.jsonl", out);
    }
    {
        std::string out;
        for (const auto& [qid, tools] : ds.qrels.by_query) {
            for (const auto& tid : tools) out += qid + "\t" + tid + "\t1\n";
        }
        write_file_atomic(dir / "qrels.tsv", out);
    }
}

// ---------- mixed benchmark ----------

// Merges datasets into one benchmark; ids become "<source_tag>/<id>" which
// keeps them collision-free across sources.
inline Dataset build_mixed(const std::vector<Dataset>& datasets, const std::string& name = "mixed") {
    if (datasets.size() < 2)
        throw Error(ErrorKind::config, "build_mixed needs at least two datasets");
    Dataset mixed;
    mixed.name = name;
    for (const auto& ds : datasets) {
        const std::string prefix = ds.name + "/";
        for (const auto& t : ds.tools) {
            RawTool copy = t;
            copy.id = prefix + t.id;
            copy.source_tag = ds.name;
            mixed.tools.push_back(std::move(copy));
        }
        for (const auto& q : ds.queries) {
            Query copy = q;
            copy.id = prefix + q.id;
            mixed.queries.push_back(std::move(copy));
        }
        for (const auto& [qid, tools] : ds.qrels.by_query) {
            auto& target = mixed.qrels.by_query[prefix + qid];
            for (const auto& tid : tools) target.insert(prefix + tid);
        }
        for (const auto& w : ds.warnings) mixed.warnings.push_back(ds.name + ": " + w);
    }
    validate(mixed);
    return mixed;
}

// Average number of relevant tools per query (the #TPQ statistic).
inline double avg_tools_per_query(const Dataset& ds) {
    if (ds.queries.empty()) throw Error(ErrorKind::validation, ds.name + ": no queries");
    if (ds.qrels.by_query.empty()) throw Error(ErrorKind::validation, ds.name + ": empty qrels");
    return static_cast<double>(ds.qrels.pair_count()) / static_cast<double>(ds.queries.size());
}

}  // namespace mftr
