#pragma once

// Aggregation of the event level to the class level: derive Class nodes from
// classifier rules, link events to their classes, and roll event-level DF
// edges up into count-weighted DF_C edges per entity type. Handover-of-work
// networks and entity-centric directly-follows graphs are views over those
// DF_C edges.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ekg/csv.hpp"
#include "ekg/event_model.hpp"
#include "ekg/graph_store.hpp"

namespace ekg {

struct ClassifierRule {
    std::string classType;                // e.g. "Activity", "Resource"
    std::vector<std::string> keyColumns;  // event properties forming the class
    std::string idJoin = "+";             // separator producing Class.ID
};

struct AggregatedClass {
    NodeRef ref;
    std::string id;
};

struct AggregatedEdge {
    RelRef rel;
    NodeRef source;
    NodeRef target;
    std::string sourceId;
    std::string targetId;
    std::string entityType;
    std::int64_t count = 0;
};

// DF_C edges of one class type plus the classes incident to them.
struct AggregatedGraph {
    std::string classType;
    std::vector<AggregatedClass> classes;
    std::vector<AggregatedEdge> edges;
};

struct LinkStats {
    std::size_t created = 0;
    std::size_t skippedMissingKey = 0;  // events lacking a classifier key
};

namespace aggregate_detail {

// The class key of an event under a rule, or nothing if any key column is
// absent.
inline std::optional<std::string> class_id_of(const Node& event, const ClassifierRule& rule) {
    std::string id;
    for (std::size_t i = 0; i < rule.keyColumns.size(); ++i) {
        const PropertyValue* v = event.prop(rule.keyColumns[i]);
        if (!v) return std::nullopt;
        if (i) id += rule.idJoin;
        id += v->to_string();
    }
    return id;
}

inline std::map<std::string, NodeRef> classes_of_type(const LabeledPropertyGraph& g,
                                                      const std::string& classType) {
    std::map<std::string, NodeRef> out;
    for (NodeRef ref :
         g.find_nodes(label::Class, {{prop::Type, Cmp::Eq, PropertyValue(classType)}}))
        out[g.node(ref).text_prop(prop::ID)] = ref;
    return out;
}

}  // namespace aggregate_detail

// One :Class node per distinct key combination. Each key column's value is
// also stored as its own property. Merge-idempotent.
inline std::size_t derive_classes(LabeledPropertyGraph& g, const ClassifierRule& rule) {
    std::map<std::string, bool> column_seen;
    for (const auto& col : rule.keyColumns) column_seen[col] = false;
    std::map<std::string, PropertyMap> wanted;  // id -> properties
    for (NodeRef ev : g.refs_with_label(label::Event)) {
        const Node& event = g.node(ev);
        bool all_present = true;
        for (const auto& col : rule.keyColumns) {
            if (event.prop(col)) column_seen[col] = true;
            else all_present = false;
        }
        if (!all_present) continue;
        auto id = aggregate_detail::class_id_of(event, rule);
        if (wanted.count(*id)) continue;
        PropertyMap props{{prop::ID, PropertyValue(*id)},
                          {prop::Type, PropertyValue(rule.classType)}};
        for (const auto& col : rule.keyColumns) props.set(col, *event.prop(col));
        wanted.emplace(*id, std::move(props));
    }
    for (const auto& [col, seen] : column_seen)
        if (!seen) throw UnknownColumn(col);

    auto existing = aggregate_detail::classes_of_type(g, rule.classType);
    std::size_t created = 0;
    for (auto& [id, props] : wanted) {
        if (existing.count(id)) continue;
        g.add_node({label::Class}, std::move(props));
        ++created;
    }
    return created;
}

// Exactly one E_C per (event, class type); events missing a key column are
// skipped and counted.
inline LinkStats link_event_classes(LabeledPropertyGraph& g, const ClassifierRule& rule) {
    auto classes = aggregate_detail::classes_of_type(g, rule.classType);
    LinkStats stats;
    for (NodeRef ev : g.refs_with_label(label::Event)) {
        auto id = aggregate_detail::class_id_of(g.node(ev), rule);
        if (!id) {
            ++stats.skippedMissingKey;
            continue;
        }
        auto it = classes.find(*id);
        if (it == classes.end()) continue;  // derive_classes not run for this value
        bool linked = false;
        for (auto& [r, cls] : g.neighbors(ev, Direction::Out, rel::E_C))
            if (cls == it->second) linked = true;
        if (!linked) {
            g.add_relationship(ev, it->second, rel::E_C, {});
            ++stats.created;
        }
    }
    return stats;
}

// Rebuilds the DF_C edges for (classType, entityType): any existing ones are
// deleted first, so reruns replace counts instead of stacking them. A DF edge
// contributes when both endpoints carry a class of the type and share a
// correlated entity of the DF edge's type. Self-loops count.
inline std::size_t aggregate_df(LabeledPropertyGraph& g, const std::string& classType,
                                const std::string& entityType) {
    if (entities_of_type(g, entityType).empty()) throw UnknownEntityType(entityType);
    auto classes = aggregate_detail::classes_of_type(g, classType);
    if (classes.empty()) throw UnknownClassType(classType);

    // event -> its class of this type (V5 guarantees at most one)
    std::map<std::uint64_t, NodeRef> event_class;
    std::set<std::uint64_t> class_refs;
    for (auto& [id, ref] : classes) class_refs.insert(ref.value);
    g.for_each_relationship([&](const Relationship& r) {
        if (r.relType == rel::E_C && class_refs.count(r.target.value))
            event_class[r.source.value] = r.target;
    });

    std::map<std::pair<NodeRef, NodeRef>, std::int64_t> counts;
    g.for_each_relationship([&](const Relationship& r) {
        if (r.relType != rel::DF) return;
        if (r.text_prop(prop::EntityType) != entityType) return;
        auto c1 = event_class.find(r.source.value);
        auto c2 = event_class.find(r.target.value);
        if (c1 == event_class.end() || c2 == event_class.end()) return;
        auto ents1 = correlated_entities(g, r.source);
        auto ents2 = correlated_entities(g, r.target);
        std::vector<NodeRef> shared;
        std::set_intersection(ents1.begin(), ents1.end(), ents2.begin(), ents2.end(),
                              std::back_inserter(shared));
        bool same_entity = false;
        for (NodeRef en : shared)
            if (g.node(en).text_prop(prop::EntityType) == entityType) same_entity = true;
        if (!same_entity) return;
        ++counts[{c1->second, c2->second}];
    });

    // Delete stale DF_C of this (classType, entityType).
    std::vector<RelRef> stale;
    g.for_each_relationship([&](const Relationship& r) {
        if (r.relType != rel::DF_C) return;
        if (r.text_prop(prop::EntityType) != entityType) return;
        if (!class_refs.count(r.source.value)) return;
        stale.push_back(r.ref);
    });
    for (RelRef r : stale) g.remove_relationship(r);

    for (const auto& [pair, count] : counts)
        g.add_relationship(pair.first, pair.second, rel::DF_C,
                           PropertyMap{{prop::EntityType, PropertyValue(entityType)},
                                       {prop::Count, PropertyValue(count)}});
    return counts.size();
}

// The DF_C subgraph for (classType, entityTypes) as it currently stands.
inline AggregatedGraph aggregated_view(const LabeledPropertyGraph& g, const std::string& classType,
                                       const std::vector<std::string>& entityTypes) {
    std::set<std::string> types(entityTypes.begin(), entityTypes.end());
    AggregatedGraph out;
    out.classType = classType;
    std::set<std::uint64_t> class_refs;
    for (auto& [id, ref] : aggregate_detail::classes_of_type(g, classType))
        class_refs.insert(ref.value);

    std::set<std::uint64_t> incident;
    g.for_each_relationship([&](const Relationship& r) {
        if (r.relType != rel::DF_C) return;
        if (!class_refs.count(r.source.value) || !class_refs.count(r.target.value)) return;
        if (!types.count(r.text_prop(prop::EntityType))) return;
        const PropertyValue* count = r.prop(prop::Count);
        out.edges.push_back({r.ref, r.source, r.target, g.node(r.source).text_prop(prop::ID),
                             g.node(r.target).text_prop(prop::ID), r.text_prop(prop::EntityType),
                             count && count->kind() == PropertyValue::Kind::Integer
                                 ? count->integer()
                                 : 0});
        incident.insert(r.source.value);
        incident.insert(r.target.value);
    });
    std::sort(out.edges.begin(), out.edges.end(), [](const AggregatedEdge& a, const AggregatedEdge& b) {
        return std::tie(a.source, a.target, a.entityType) < std::tie(b.source, b.target, b.entityType);
    });
    for (std::uint64_t ref : incident)
        out.classes.push_back({NodeRef{ref}, g.node(NodeRef{ref}).text_prop(prop::ID)});
    return out;
}

// Convenience: aggregate DF over Resource classes along a case-level entity
// type; the result is the handover-of-work network.
inline AggregatedGraph handover_network(LabeledPropertyGraph& g,
                                        const std::string& caseEntityType) {
    aggregate_df(g, "Resource", caseEntityType);
    return aggregated_view(g, "Resource", {caseEntityType});
}

// Union of per-type aggregations under one class type; each edge keeps its
// entity type so renderers can separate them.
inline AggregatedGraph entity_centric_dfg(LabeledPropertyGraph& g, const std::string& classType,
                                          const std::vector<std::string>& entityTypes) {
    for (const auto& type : entityTypes) aggregate_df(g, classType, type);
    AggregatedGraph out = aggregated_view(g, classType, entityTypes);
    out.classType = classType;
    return out;
}

// Subgraph keeping edges with count >= minCount and the classes incident to a
// kept edge.
inline AggregatedGraph filter_by_count(const AggregatedGraph& aggregated, std::int64_t minCount) {
    AggregatedGraph out;
    out.classType = aggregated.classType;
    std::set<std::uint64_t> incident;
    for (const auto& e : aggregated.edges) {
        if (e.count < minCount) continue;
        out.edges.push_back(e);
        incident.insert(e.source.value);
        incident.insert(e.target.value);
    }
    for (const auto& c : aggregated.classes)
        if (incident.count(c.ref.value)) out.classes.push_back(c);
    return out;
}

// CSV triple list: sourceClassID,targetClassID,entityType,count
inline std::string aggregated_to_csv(const AggregatedGraph& aggregated) {
    std::string out = "sourceClassID,targetClassID,entityType,count\n";
    for (const auto& e : aggregated.edges) {
        out += csv_row({e.sourceId, e.targetId, e.entityType, std::to_string(e.count)});
    }
    return out;
}

}  // namespace ekg
