#pragma once

// Derivation config: the JSON document that carries the domain knowledge
// driving ingestion and aggregation. Top-level keys: timestampFormat,
// defaultLogId, columnTypeHints, allowCrossLogDf, entities, reifications,
// classifiers.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ekg/aggregate.hpp"
#include "ekg/errors.hpp"
#include "ekg/ingest.hpp"

namespace ekg {

struct DerivationConfig {
    ImportConfig import;
    bool allowCrossLogDf = false;
    std::vector<EntityRule> entities;
    std::vector<ReificationRule> reifications;
    std::vector<ClassifierRule> classifiers;
};

namespace config_detail {

inline PropertyValue::Kind kind_from_string(const std::string& s) {
    if (s == "text" || s == "string") return PropertyValue::Kind::Text;
    if (s == "integer" || s == "int") return PropertyValue::Kind::Integer;
    if (s == "float" || s == "double") return PropertyValue::Kind::Float;
    if (s == "boolean" || s == "bool") return PropertyValue::Kind::Boolean;
    throw ConfigError("unknown type hint '" + s + "'");
}

inline PropertyValue value_from_json(const nlohmann::json& j) {
    if (j.is_string()) return PropertyValue(j.get<std::string>());
    if (j.is_number_integer()) return PropertyValue(j.get<std::int64_t>());
    if (j.is_number_float()) return PropertyValue(j.get<double>());
    if (j.is_boolean()) return PropertyValue(j.get<bool>());
    throw ConfigError("unsupported literal in filter: " + j.dump());
}

inline std::string require_string(const nlohmann::json& j, const std::string& key,
                                  const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw ConfigError(where + " requires string field '" + key + "'");
    return j.at(key).get<std::string>();
}

}  // namespace config_detail

inline DerivationConfig parse_config(const nlohmann::json& j) {
    using config_detail::require_string;
    if (!j.is_object()) throw ConfigError("top level must be an object");
    DerivationConfig cfg;
    if (j.contains("timestampFormat"))
        cfg.import.timestampFormat = j.at("timestampFormat").get<std::string>();
    if (j.contains("defaultLogId"))
        cfg.import.defaultLogId = j.at("defaultLogId").get<std::string>();
    if (j.contains("allowCrossLogDf")) cfg.allowCrossLogDf = j.at("allowCrossLogDf").get<bool>();
    if (j.contains("columnTypeHints")) {
        for (auto& [key, val] : j.at("columnTypeHints").items())
            cfg.import.columnTypeHints[key] =
                config_detail::kind_from_string(val.get<std::string>());
    }
    if (j.contains("entities")) {
        for (const auto& e : j.at("entities")) {
            EntityRule rule;
            rule.entityType = require_string(e, "entityType", "entity rule");
            rule.idColumn = require_string(e, "idColumn", "entity rule");
            if (e.contains("filter")) {
                const auto& f = e.at("filter");
                EventFilter filter;
                filter.column = require_string(f, "column", "entity filter");
                if (!f.contains("equals")) throw ConfigError("entity filter requires 'equals'");
                filter.equals = config_detail::value_from_json(f.at("equals"));
                rule.filter = std::move(filter);
            }
            cfg.entities.push_back(std::move(rule));
        }
    }
    if (j.contains("reifications")) {
        for (const auto& r : j.at("reifications")) {
            ReificationRule rule;
            rule.type1 = require_string(r, "type1", "reification rule");
            rule.type2 = require_string(r, "type2", "reification rule");
            rule.refToColumn = require_string(r, "refToColumn", "reification rule");
            rule.compositeType = require_string(r, "compositeType", "reification rule");
            if (rule.type1 == rule.type2)
                throw ConfigError("reification requires two distinct entity types");
            if (r.contains("nullSentinels"))
                rule.nullSentinels = r.at("nullSentinels").get<std::vector<std::string>>();
            cfg.reifications.push_back(std::move(rule));
        }
    }
    if (j.contains("classifiers")) {
        for (const auto& c : j.at("classifiers")) {
            ClassifierRule rule;
            rule.classType = require_string(c, "classType", "classifier rule");
            if (!c.contains("keyColumns") || !c.at("keyColumns").is_array() ||
                c.at("keyColumns").empty())
                throw ConfigError("classifier rule requires non-empty 'keyColumns'");
            rule.keyColumns = c.at("keyColumns").get<std::vector<std::string>>();
            if (c.contains("idJoin")) rule.idJoin = c.at("idJoin").get<std::string>();
            cfg.classifiers.push_back(std::move(rule));
        }
    }
    return cfg;
}

inline DerivationConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace ekg
