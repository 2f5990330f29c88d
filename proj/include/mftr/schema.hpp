#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mftr/common.hpp"

namespace mftr {

using json = nlohmann::json;

// ---------- the four documentation fields ----------

enum class FieldId : int {
    description = 0,
    parameters = 1,
    response = 2,
    examples = 3,
};

inline constexpr std::array<FieldId, 4> kAllFields = {
    FieldId::description, FieldId::parameters, FieldId::response, FieldId::examples};

inline const char* field_name(FieldId f) {
    switch (f) {
        case FieldId::description: return "description";
        case FieldId::parameters: return "parameters";
        case FieldId::response: return "response";
        case FieldId::examples: return "examples";
    }
    return "?";
}

inline FieldId field_from_name(const std::string& name) {
    for (FieldId f : kAllFields) {
        if (name == field_name(f)) return f;
    }
    throw Error(ErrorKind::config, "unknown field name: " + name);
}

inline std::size_t field_index(FieldId f) { return static_cast<std::size_t>(f); }

// ---------- standardized tool documentation ----------

struct ParamSpec {
    std::string name;
    std::string type_hint;
    std::string description;
    bool required = true;  // default per the standardization rule

    bool operator==(const ParamSpec&) const = default;
};

struct StandardizedTool {
    std::string tool_id;
    std::string description;
    std::vector<ParamSpec> parameters;
    std::string response;
    std::vector<std::string> examples;

    bool operator==(const StandardizedTool&) const = default;
};

inline void validate(const StandardizedTool& tool) {
    if (tool.tool_id.empty())
        throw Error(ErrorKind::validation, "standardized tool without id");
    if (tool.description.empty())
        throw Error(ErrorKind::validation, "tool " + tool.tool_id + ": empty description");
    std::map<std::string, int> seen;
    for (const auto& p : tool.parameters) {
        if (p.name.empty())
            throw Error(ErrorKind::validation, "tool " + tool.tool_id + ": parameter with empty name");
        if (++seen[p.name] > 1)
            throw Error(ErrorKind::validation,
                        "tool " + tool.tool_id + ": duplicate parameter name '" + p.name + "'");
    }
}

// ---------- field text rendering ----------

// One line per parameter as it appears in the parameters field corpus.
inline std::string render_param_line(const ParamSpec& p) {
    std::string out = p.name;
    if (!p.type_hint.empty()) out += " (" + p.type_hint + ")";
    if (!p.description.empty()) out += ": " + p.description;
    out += p.required ? " [required]" : " [optional]";
    return out;
}

// Rendering used for parameter-vs-argument matching; the required flag is a
// ranking signal, not match text, so it stays out.
inline std::string render_param_for_match(const ParamSpec& p) {
    std::string out = p.name;
    if (!p.type_hint.empty()) out += " (" + p.type_hint + ")";
    if (!p.description.empty()) out += ": " + p.description;
    return out;
}

inline std::string render_field_text(const StandardizedTool& tool, FieldId f) {
    switch (f) {
        case FieldId::description:
            return tool.description;
        case FieldId::parameters: {
            std::vector<std::string> lines;
            lines.reserve(tool.parameters.size());
            for (const auto& p : tool.parameters) lines.push_back(render_param_line(p));
            return join(lines, "\n");
        }
        case FieldId::response:
            return tool.response;
        case FieldId::examples:
            return join(tool.examples, "\n");
    }
    return {};
}

// Concatenation of all four standardized fields; the canonical flat-text
// representation used for negative mining.
inline std::string render_standardized_concat(const StandardizedTool& tool) {
    std::string out;
    for (FieldId f : kAllFields) {
        std::string part = render_field_text(tool, f);
        if (!part.empty()) {
            if (!out.empty()) out += "\n";
            out += part;
        }
    }
    return out;
}

// ---------- JSON (de)serialization ----------

inline json to_json(const ParamSpec& p) {
    return json{{"name", p.name},
                {"type", p.type_hint},
                {"description", p.description},
                {"required", p.required}};
}

inline json to_json(const StandardizedTool& t) {
    json params = json::array();
    for (const auto& p : t.parameters) params.push_back(to_json(p));
    return json{{"tool_id", t.tool_id},
                {"description", t.description},
                {"parameters", params},
                {"response", t.response},
                {"examples", t.examples}};
}

inline ParamSpec param_from_json(const json& j) {
    ParamSpec p;
    p.name = j.value("name", "");
    p.type_hint = j.value("type", "");
    p.description = j.value("description", "");
    p.required = j.value("required", true);
    return p;
}

inline StandardizedTool standardized_from_json(const json& j) {
    StandardizedTool t;
    t.tool_id = j.value("tool_id", "");
    t.description = j.value("description", "");
    if (j.contains("parameters")) {
        for (const auto& pj : j.at("parameters")) t.parameters.push_back(param_from_json(pj));
    }
    t.response = j.value("response", "");
    if (j.contains("examples")) {
        for (const auto& e : j.at("examples")) t.examples.push_back(e.get<std::string>());
    }
    return t;
}

inline void save_standardized_jsonl(const std::vector<StandardizedTool>& tools,
                                    const std::filesystem::path& path) {
    std::string out;
    for (const auto& t : tools) {
        out += to_json(t).dump();
        out += "\n";
    }
    write_file_atomic(path, out);
}

inline std::vector<StandardizedTool> load_standardized_jsonl(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw Error(ErrorKind::artifact_missing,
                    "missing standardized corpus " + path.string() +
                        " (produce it with the `standardize` command)");
    std::vector<StandardizedTool> tools;
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::parse,
                        path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        StandardizedTool t = standardized_from_json(j);
        validate(t);
        tools.push_back(std::move(t));
    }
    return tools;
}

}  // namespace mftr
