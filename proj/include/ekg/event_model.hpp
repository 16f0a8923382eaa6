#pragma once

// Semantic vocabulary of the event graph: the four node roles, the five
// relationship types, and the property keys they rely on. The ordering key
// (timestamp, NodeRef) defined here is the single global total order used for
// DF derivation, validation witnesses, and variant extraction.

#include <array>
#include <limits>
#include <optional>
#include <string>

#include "ekg/graph_store.hpp"

namespace ekg {

namespace label {
inline const std::string Event = "Event";
inline const std::string Entity = "Entity";
inline const std::string Log = "Log";
inline const std::string Class = "Class";
}  // namespace label

namespace rel {
inline const std::string E_EN = "E_EN";  // event -> entity correlation
inline const std::string L_E = "L_E";    // log -> event membership
inline const std::string DF = "DF";      // event -> event directly-follows
inline const std::string E_C = "E_C";    // event -> class observation
inline const std::string DF_C = "DF_C";  // class -> class aggregated DF
}  // namespace rel

namespace prop {
inline const std::string Activity = "Activity";
inline const std::string Timestamp = "Timestamp";
inline const std::string LogID = "LogID";
inline const std::string EntityType = "EntityType";
inline const std::string ID = "ID";
inline const std::string UID = "uID";
inline const std::string Type = "Type";
inline const std::string Count = "count";
// Which entity's chain produced a DF edge; lets re-derivation stay idempotent
// while same-typed entities keep separate parallel edges.
inline const std::string EntityUID = "EntityUID";
}  // namespace prop

inline const std::array<std::string, 4> kSemanticNodeLabels = {label::Class, label::Entity,
                                                               label::Event, label::Log};
inline const std::array<std::string, 5> kSemanticRelTypes = {rel::DF, rel::DF_C, rel::E_C,
                                                             rel::E_EN, rel::L_E};

inline bool is_semantic_node_label(const std::string& l) {
    return l == label::Event || l == label::Entity || l == label::Log || l == label::Class;
}

inline bool is_semantic_rel_type(const std::string& t) {
    return t == rel::E_EN || t == rel::L_E || t == rel::DF || t == rel::E_C || t == rel::DF_C;
}

// (timestamp, ref): refs carry import order, so ties break toward the earlier
// source row.
struct OrderingKey {
    std::int64_t millis = 0;
    NodeRef ref;
    friend auto operator<=>(const OrderingKey&, const OrderingKey&) = default;
};

inline std::optional<OrderingKey> ordering_key(const Node& event) {
    const PropertyValue* t = event.prop(prop::Timestamp);
    if (!t || t->kind() != PropertyValue::Kind::Time) return std::nullopt;
    return OrderingKey{t->time().millis, event.ref};
}

// Correlated events of an entity node (sources of its incoming E_EN edges).
inline std::vector<NodeRef> correlated_events(const LabeledPropertyGraph& g, NodeRef entity) {
    std::vector<NodeRef> out;
    for (auto& [rel_ref, ev] : g.neighbors(entity, Direction::In, rel::E_EN)) out.push_back(ev);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Entities an event is correlated to (targets of its outgoing E_EN edges).
inline std::vector<NodeRef> correlated_entities(const LabeledPropertyGraph& g, NodeRef event) {
    std::vector<NodeRef> out;
    for (auto& [rel_ref, en] : g.neighbors(event, Direction::Out, rel::E_EN)) out.push_back(en);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Logs an event belongs to (normally exactly one).
inline std::vector<NodeRef> logs_of_event(const LabeledPropertyGraph& g, NodeRef event) {
    std::vector<NodeRef> out;
    for (auto& [rel_ref, log] : g.neighbors(event, Direction::In, rel::L_E)) out.push_back(log);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Sorts event refs by the global ordering key. Events without a usable
// timestamp sort first by ref; the validator reports them separately.
inline void sort_by_ordering_key(const LabeledPropertyGraph& g, std::vector<NodeRef>& events) {
    std::sort(events.begin(), events.end(), [&](NodeRef a, NodeRef b) {
        auto ka = ordering_key(g.node(a));
        auto kb = ordering_key(g.node(b));
        std::int64_t ma = ka ? ka->millis : std::numeric_limits<std::int64_t>::min();
        std::int64_t mb = kb ? kb->millis : std::numeric_limits<std::int64_t>::min();
        if (ma != mb) return ma < mb;
        return a < b;
    });
}

inline std::optional<NodeRef> entity_by_uid(const LabeledPropertyGraph& g,
                                            const std::string& uid) {
    auto hits = g.find_nodes(label::Entity, {{prop::UID, Cmp::Eq, PropertyValue(uid)}});
    if (hits.empty()) return std::nullopt;
    return hits.front();
}

inline std::vector<NodeRef> entities_of_type(const LabeledPropertyGraph& g,
                                             const std::string& entityType) {
    return g.find_nodes(label::Entity, {{prop::EntityType, Cmp::Eq, PropertyValue(entityType)}});
}

}  // namespace ekg
