#pragma once

// Event-table ingestion: CSV -> Event nodes -> Log nodes -> Entity derivation
// and correlation -> per-entity directly-follows chains -> reification of
// entity relations into composite entities. Every derive/correlate operation
// is merge-idempotent: running it twice leaves the graph unchanged.

#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ekg/csv.hpp"
#include "ekg/event_model.hpp"
#include "ekg/graph_store.hpp"
#include "ekg/time.hpp"

namespace ekg {

struct EventRecord {
    std::size_t rowIndex = 0;           // 1-based position in the source file
    PropertyMap values;                 // one entry per non-empty cell
};

struct EventTable {
    std::vector<std::string> header;
    std::vector<EventRecord> rows;      // import order preserved

    bool has_column(const std::string& name) const {
        return std::find(header.begin(), header.end(), name) != header.end();
    }
};

struct ImportConfig {
    std::string timestampFormat = "iso8601";
    std::string defaultLogId = "log";
    std::map<std::string, PropertyValue::Kind> columnTypeHints;
};

// One equality test over an event property; absent properties never match.
struct EventFilter {
    std::string column;
    PropertyValue equals;

    bool matches(const Node& event) const {
        const PropertyValue* v = event.prop(column);
        return v && *v == equals;
    }
};

struct EntityRule {
    std::string entityType;
    std::string idColumn;
    std::optional<EventFilter> filter;

    bool admits(const Node& event) const { return !filter || filter->matches(event); }
};

struct ReificationRule {
    std::string type1;
    std::string type2;
    std::string refToColumn;   // property on type2's events referencing type1's ID
    std::string compositeType;
    std::vector<std::string> nullSentinels = {"Unknown", ""};

    bool is_null(const std::string& id) const {
        return std::find(nullSentinels.begin(), nullSentinels.end(), id) != nullSentinels.end();
    }
};

struct DfOptions {
    bool allowCrossLog = false;  // chain across logs instead of per log
};

namespace ingest_detail {

inline PropertyValue parse_hinted(const std::string& cell, PropertyValue::Kind kind,
                                  std::size_t rowIndex, const std::string& column) {
    switch (kind) {
        case PropertyValue::Kind::Text:
            return PropertyValue(cell);
        case PropertyValue::Kind::Integer: {
            std::int64_t v = 0;
            auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (r.ec != std::errc{} || r.ptr != cell.data() + cell.size())
                throw MalformedCsv(rowIndex, "column '" + column + "': not an integer: " + cell);
            return PropertyValue(v);
        }
        case PropertyValue::Kind::Float: {
            // std::from_chars for double is unreliable pre-gcc12 for some locales; strtod is fine here.
            char* end = nullptr;
            double v = std::strtod(cell.c_str(), &end);
            if (end != cell.c_str() + cell.size())
                throw MalformedCsv(rowIndex, "column '" + column + "': not a float: " + cell);
            return PropertyValue(v);
        }
        case PropertyValue::Kind::Boolean: {
            if (cell == "true" || cell == "1") return PropertyValue(true);
            if (cell == "false" || cell == "0") return PropertyValue(false);
            throw MalformedCsv(rowIndex, "column '" + column + "': not a boolean: " + cell);
        }
        default:
            throw MalformedCsv(rowIndex, "column '" + column + "': unsupported type hint");
    }
}

inline std::string log_id_of_event(const Node& event, const std::string& defaultLogId) {
    const PropertyValue* v = event.prop(prop::LogID);
    if (v && v->is_text() && !v->text().empty()) return v->text();
    return defaultLogId;
}

}  // namespace ingest_detail

inline EventTable event_table_from_rows(const std::vector<std::vector<std::string>>& raw,
                                        const ImportConfig& config) {
    if (raw.empty()) throw MalformedCsv(0, "empty document, header row required");
    EventTable table;
    table.header = raw.front();
    if (!table.has_column(prop::Activity)) throw MissingColumn(prop::Activity);
    if (!table.has_column(prop::Timestamp)) throw MissingColumn(prop::Timestamp);

    for (std::size_t r = 1; r < raw.size(); ++r) {
        EventRecord rec;
        rec.rowIndex = r;
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            const std::string& column = table.header[c];
            const std::string& cell = raw[r][c];
            if (cell.empty()) continue;  // absent property, not a null value
            if (column == prop::Timestamp) {
                auto ts = parse_timestamp(cell, config.timestampFormat);
                if (!ts) throw UnparseableTimestamp(r, cell);
                rec.values.set(column, PropertyValue(*ts));
            } else if (auto hint = config.columnTypeHints.find(column);
                       hint != config.columnTypeHints.end()) {
                rec.values.set(column, ingest_detail::parse_hinted(cell, hint->second, r, column));
            } else {
                rec.values.set(column, PropertyValue(cell));
            }
        }
        if (!rec.values.contains(prop::Timestamp))
            throw UnparseableTimestamp(r, "");
        table.rows.push_back(std::move(rec));
    }
    return table;
}

inline EventTable load_event_table(const std::string& path, const ImportConfig& config) {
    return event_table_from_rows(parse_csv_file(path), config);
}

// One :Event node per row, properties per non-empty cell, refs in row order.
inline std::size_t import_events(LabeledPropertyGraph& g, const EventTable& table) {
    if (!g.refs_with_label(label::Event).empty()) throw NonEmptyGraph();
    for (const EventRecord& rec : table.rows)
        g.add_node({label::Event}, rec.values);
    return table.rows.size();
}

// One :Log node per distinct LogID (defaultLogId when absent) and one L_E
// edge per event. Reruns merge: nothing new is created.
inline std::size_t create_logs(LabeledPropertyGraph& g, const std::string& defaultLogId) {
    std::size_t created = 0;
    std::map<std::string, NodeRef> logs;
    for (NodeRef ref : g.find_nodes(label::Log))
        logs[g.node(ref).text_prop(prop::ID)] = ref;

    for (NodeRef ev : g.refs_with_label(label::Event)) {
        std::string id = ingest_detail::log_id_of_event(g.node(ev), defaultLogId);
        auto it = logs.find(id);
        NodeRef log;
        if (it == logs.end()) {
            log = g.add_node({label::Log}, PropertyMap{{prop::ID, PropertyValue(id)}});
            logs.emplace(id, log);
            ++created;
        } else {
            log = it->second;
        }
        bool linked = false;
        for (auto& [r, l] : g.neighbors(ev, Direction::In, rel::L_E))
            if (l == log) linked = true;
        if (!linked) g.add_relationship(log, ev, rel::L_E, {});
    }
    return created;
}

// One :Entity node per distinct non-empty idColumn value among events passing
// the rule's filter; uID is the type-prefixed identifier.
inline std::size_t derive_entities(LabeledPropertyGraph& g, const EntityRule& rule) {
    bool column_seen = false;
    std::set<std::string> ids;
    for (NodeRef ev : g.refs_with_label(label::Event)) {
        const Node& event = g.node(ev);
        const PropertyValue* v = event.prop(rule.idColumn);
        if (v) column_seen = true;
        if (!rule.admits(event) || !v) continue;
        std::string id = v->to_string();
        if (!id.empty()) ids.insert(id);
    }
    if (!column_seen) throw UnknownColumn(rule.idColumn);

    std::size_t created = 0;
    for (const std::string& id : ids) {
        std::string uid = rule.entityType + id;
        if (entity_by_uid(g, uid)) continue;
        g.add_node({label::Entity},
                   PropertyMap{{prop::ID, PropertyValue(id)},
                               {prop::EntityType, PropertyValue(rule.entityType)},
                               {prop::UID, PropertyValue(uid)}});
        ++created;
    }
    return created;
}

// E_EN edges from each admitted event to the entity its idColumn names.
inline std::size_t correlate_events(LabeledPropertyGraph& g, const EntityRule& rule) {
    bool column_seen = false;
    std::map<std::string, NodeRef> by_id;
    for (NodeRef en : entities_of_type(g, rule.entityType))
        by_id[g.node(en).text_prop(prop::ID)] = en;

    std::size_t created = 0;
    for (NodeRef ev : g.refs_with_label(label::Event)) {
        const Node& event = g.node(ev);
        const PropertyValue* v = event.prop(rule.idColumn);
        if (v) column_seen = true;
        if (!rule.admits(event) || !v) continue;
        auto it = by_id.find(v->to_string());
        if (it == by_id.end()) continue;
        bool linked = false;
        for (auto& [r, en] : g.neighbors(ev, Direction::Out, rel::E_EN))
            if (en == it->second) linked = true;
        if (!linked) {
            g.add_relationship(ev, it->second, rel::E_EN, {});
            ++created;
        }
    }
    if (!column_seen) throw UnknownColumn(rule.idColumn);
    return created;
}

// Directly-follows chains: per entity of the type, its correlated events are
// sorted by (timestamp, ref) and chained, one log at a time unless cross-log
// chaining is enabled. Each edge records the entity that witnessed it, so
// entities of the same type keep their own parallel edges and reruns create
// nothing.
inline std::size_t derive_df(LabeledPropertyGraph& g, const std::string& entityType,
                             const DfOptions& options = {}) {
    std::vector<NodeRef> entities = entities_of_type(g, entityType);
    if (entities.empty()) throw UnknownEntityType(entityType);

    std::size_t created = 0;
    for (NodeRef en : entities) {
        const std::string uid = g.node(en).text_prop(prop::UID);
        std::vector<NodeRef> events = correlated_events(g, en);

        std::map<std::uint64_t, std::vector<NodeRef>> groups;
        if (options.allowCrossLog) {
            groups[0] = std::move(events);
        } else {
            for (NodeRef ev : events) {
                auto logs = logs_of_event(g, ev);
                std::uint64_t key = logs.empty() ? 0 : logs.front().value;
                groups[key].push_back(ev);
            }
        }

        for (auto& [log_key, group] : groups) {
            sort_by_ordering_key(g, group);
            for (std::size_t i = 0; i + 1 < group.size(); ++i) {
                NodeRef a = group[i], b = group[i + 1];
                bool exists = false;
                for (auto& [r, tgt] : g.neighbors(a, Direction::Out, rel::DF)) {
                    if (tgt != b) continue;
                    const Relationship& dfr = g.relationship(r);
                    if (dfr.text_prop(prop::EntityType) == entityType &&
                        dfr.text_prop(prop::EntityUID) == uid) {
                        exists = true;
                        break;
                    }
                }
                if (exists) continue;
                g.add_relationship(a, b, rel::DF,
                                   PropertyMap{{prop::EntityType, PropertyValue(entityType)},
                                               {prop::EntityUID, PropertyValue(uid)}});
                ++created;
            }
        }
    }
    return created;
}

// Reifies the relation observed between type1 and type2 into composite
// entities, one per distinct (id1, id2) pair seen through a type2 event whose
// refToColumn names an existing type1 entity. Sentinel ids are skipped.
inline std::size_t reify_relation(LabeledPropertyGraph& g, const ReificationRule& rule) {
    std::set<std::string> type1_ids;
    for (NodeRef en : entities_of_type(g, rule.type1))
        type1_ids.insert(g.node(en).text_prop(prop::ID));
    if (type1_ids.empty()) throw UnknownEntityType(rule.type1);

    std::vector<NodeRef> type2 = entities_of_type(g, rule.type2);
    if (type2.empty()) throw UnknownEntityType(rule.type2);

    bool column_seen = false;
    std::set<std::pair<std::string, std::string>> pairs;
    for (NodeRef en : type2) {
        std::string id2 = g.node(en).text_prop(prop::ID);
        for (NodeRef ev : correlated_events(g, en)) {
            const PropertyValue* ref = g.node(ev).prop(rule.refToColumn);
            if (!ref) continue;
            column_seen = true;
            std::string id1 = ref->to_string();
            if (rule.is_null(id1) || rule.is_null(id2)) continue;
            if (!type1_ids.count(id1)) continue;
            pairs.emplace(id1, id2);
        }
    }
    if (!column_seen) {
        // Distinguish a truly unknown column from all-sentinel data.
        bool anywhere = false;
        for (NodeRef ev : g.refs_with_label(label::Event))
            if (g.node(ev).prop(rule.refToColumn)) anywhere = true;
        if (!anywhere) throw UnknownColumn(rule.refToColumn);
    }

    std::size_t created = 0;
    for (const auto& [id1, id2] : pairs) {
        std::string id = id1 + "_" + id2;
        std::string uid = rule.compositeType + "_" + id;
        if (entity_by_uid(g, uid)) continue;
        PropertyMap props{{prop::ID, PropertyValue(id)},
                          {prop::EntityType, PropertyValue(rule.compositeType)},
                          {prop::UID, PropertyValue(uid)}};
        props.set(rule.type1 + "ID", PropertyValue(id1));
        props.set(rule.type2 + "ID", PropertyValue(id2));
        g.add_node({label::Entity}, std::move(props));
        ++created;
    }
    return created;
}

// Correlates every event of a member entity to the composites referencing
// that member, deduplicated.
inline std::size_t correlate_composite(LabeledPropertyGraph& g, const std::string& compositeType,
                                       const std::string& memberType) {
    std::vector<NodeRef> composites = entities_of_type(g, compositeType);
    if (composites.empty()) throw UnknownEntityType(compositeType);
    std::vector<NodeRef> members = entities_of_type(g, memberType);
    if (members.empty()) throw UnknownEntityType(memberType);

    std::map<std::string, std::vector<NodeRef>> members_by_id;
    for (NodeRef en : members) members_by_id[g.node(en).text_prop(prop::ID)].push_back(en);

    const std::string ref_key = memberType + "ID";
    std::size_t created = 0;
    for (NodeRef comp : composites) {
        const PropertyValue* member_id = g.node(comp).prop(ref_key);
        if (!member_id) continue;
        auto it = members_by_id.find(member_id->to_string());
        if (it == members_by_id.end()) continue;
        for (NodeRef member : it->second) {
            for (NodeRef ev : correlated_events(g, member)) {
                bool linked = false;
                for (auto& [r, en] : g.neighbors(ev, Direction::Out, rel::E_EN))
                    if (en == comp) linked = true;
                if (!linked) {
                    g.add_relationship(ev, comp, rel::E_EN, {});
                    ++created;
                }
            }
        }
    }
    return created;
}

}  // namespace ekg
