#pragma once

// Behavioral query primitives over the event graph: events of an entity,
// directly-follows pairs, eventually-follows paths, case variants, durations
// between activities, and pattern counts across entity relations. All
// primitives are read-only and safe to run concurrently over a finished
// graph.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ekg/event_model.hpp"
#include "ekg/graph_store.hpp"

namespace ekg {

// A walk along one entity's DF chain: consecutive events connected by DF
// edges of the stated entity type.
struct EventPath {
    std::string entityType;
    std::string entityUid;
    std::vector<NodeRef> events;  // size >= 2
    std::vector<RelRef> rels;     // size == events.size() - 1
};

struct DurationResult {
    NodeRef startEvent;
    NodeRef endEvent;
    std::int64_t elapsedMillis = 0;
    NodeRef entity;
    std::string entityUid;
};

enum class DurationMode { Max, Min, All };

namespace query_detail {

// An entity's events in chain order: from the event with no incoming DF of
// the type within this entity to the event with no outgoing one.
struct Chain {
    std::vector<NodeRef> events;
    std::vector<RelRef> rels;  // connecting DF edges, one per step
};

inline Chain chain_of_entity(const LabeledPropertyGraph& g, NodeRef entity,
                             const std::string& entityType) {
    std::vector<NodeRef> events = correlated_events(g, entity);
    sort_by_ordering_key(g, events);

    // Verify each consecutive pair is connected by a DF edge of the type.
    // Entities of the same type may share events (composites do), so walking
    // raw out-edges could jump into a sibling's chain; the ordering key
    // reproduces exactly the chain derivation built. A missing edge means
    // validator-level corruption (or an entity spanning logs, whose events
    // form one chain per log, not one chain).
    Chain chain;
    chain.events = std::move(events);
    for (std::size_t i = 0; i + 1 < chain.events.size(); ++i) {
        std::optional<RelRef> found;
        for (auto& [r, tgt] : g.neighbors(chain.events[i], Direction::Out, rel::DF)) {
            if (tgt != chain.events[i + 1]) continue;
            if (g.relationship(r).text_prop(prop::EntityType) != entityType) continue;
            found = r;  // neighbors is RelRef-ascending; first hit is smallest
            break;
        }
        if (!found)
            throw BrokenChain("no DF edge of type '" + entityType + "' between events #" +
                              std::to_string(chain.events[i].value) + " and #" +
                              std::to_string(chain.events[i + 1].value));
        chain.rels.push_back(*found);
    }
    return chain;
}

inline NodeRef require_entity(const LabeledPropertyGraph& g, const std::string& uid) {
    auto en = entity_by_uid(g, uid);
    if (!en) throw UnknownEntity(uid);
    return *en;
}

inline std::vector<NodeRef> require_type(const LabeledPropertyGraph& g,
                                         const std::string& entityType) {
    auto ents = entities_of_type(g, entityType);
    if (ents.empty()) throw UnknownEntityType(entityType);
    return ents;
}

inline bool activity_is(const LabeledPropertyGraph& g, NodeRef event, const std::string& name) {
    return g.node(event).text_prop(prop::Activity) == name;
}

}  // namespace query_detail

// Q1: correlated events of one entity filtered by property predicates.
inline std::vector<NodeRef> events_of_entity(const LabeledPropertyGraph& g,
                                             const std::string& entityUid,
                                             const std::vector<PropPredicate>& predicate = {}) {
    NodeRef entity = query_detail::require_entity(g, entityUid);
    std::vector<NodeRef> out;
    for (NodeRef ev : correlated_events(g, entity)) {
        const Node& n = g.node(ev);
        bool ok = true;
        for (const auto& p : predicate) {
            const PropertyValue* v = n.prop(p.key);
            if (!v || !apply_cmp(*v, p.cmp, p.value)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(ev);
    }
    return out;
}

// Q2: DF edges of one entity type, optionally filtered by endpoint
// activities. Parallel edges collapse to one (from, to) pair.
inline std::vector<std::pair<NodeRef, NodeRef>> directly_follows_pairs(
    const LabeledPropertyGraph& g, const std::string& entityType,
    const std::optional<std::string>& fromActivity = {},
    const std::optional<std::string>& toActivity = {}) {
    query_detail::require_type(g, entityType);
    std::set<std::pair<NodeRef, NodeRef>> pairs;
    g.for_each_relationship([&](const Relationship& r) {
        if (r.relType != rel::DF) return;
        if (r.text_prop(prop::EntityType) != entityType) return;
        if (fromActivity && !query_detail::activity_is(g, r.source, *fromActivity)) return;
        if (toActivity && !query_detail::activity_is(g, r.target, *toActivity)) return;
        pairs.emplace(r.source, r.target);
    });
    return {pairs.begin(), pairs.end()};
}

// Q3: per entity of the type, every DF path (length >= 1) from a fromActivity
// event to a toActivity event.
inline std::vector<EventPath> eventually_follows(const LabeledPropertyGraph& g,
                                                 const std::string& entityType,
                                                 const std::string& fromActivity,
                                                 const std::string& toActivity) {
    std::vector<EventPath> out;
    for (NodeRef en : query_detail::require_type(g, entityType)) {
        auto chain = query_detail::chain_of_entity(g, en, entityType);
        const std::string uid = g.node(en).text_prop(prop::UID);
        for (std::size_t i = 0; i < chain.events.size(); ++i) {
            if (!query_detail::activity_is(g, chain.events[i], fromActivity)) continue;
            for (std::size_t j = i + 1; j < chain.events.size(); ++j) {
                if (!query_detail::activity_is(g, chain.events[j], toActivity)) continue;
                EventPath path;
                path.entityType = entityType;
                path.entityUid = uid;
                path.events.assign(chain.events.begin() + i, chain.events.begin() + j + 1);
                path.rels.assign(chain.rels.begin() + i, chain.rels.begin() + j);
                out.push_back(std::move(path));
            }
        }
    }
    return out;
}

// Q4: the activity sequence along one entity's DF chain.
inline std::vector<std::string> variant_of(const LabeledPropertyGraph& g,
                                           const std::string& entityUid,
                                           const std::string& entityType) {
    NodeRef entity = query_detail::require_entity(g, entityUid);
    auto chain = query_detail::chain_of_entity(g, entity, entityType);
    std::vector<std::string> out;
    out.reserve(chain.events.size());
    for (NodeRef ev : chain.events) out.push_back(g.node(ev).text_prop(prop::Activity));
    return out;
}

// Q5: per qualifying entity, the elapsed time from its first fromActivity
// event to the last toActivity event that eventually follows it.
inline std::vector<DurationResult> duration_between(const LabeledPropertyGraph& g,
                                                    const std::string& entityType,
                                                    const std::string& fromActivity,
                                                    const std::string& toActivity,
                                                    DurationMode mode = DurationMode::All) {
    std::vector<DurationResult> all;
    for (NodeRef en : query_detail::require_type(g, entityType)) {
        auto chain = query_detail::chain_of_entity(g, en, entityType);
        std::optional<std::size_t> start;
        for (std::size_t i = 0; i < chain.events.size(); ++i)
            if (query_detail::activity_is(g, chain.events[i], fromActivity)) {
                start = i;
                break;
            }
        if (!start) continue;
        std::optional<std::size_t> end;
        for (std::size_t j = chain.events.size(); j-- > *start + 1;)
            if (query_detail::activity_is(g, chain.events[j], toActivity)) {
                end = j;
                break;
            }
        if (!end) continue;
        auto k1 = ordering_key(g.node(chain.events[*start]));
        auto k2 = ordering_key(g.node(chain.events[*end]));
        if (!k1 || !k2) continue;
        all.push_back({chain.events[*start], chain.events[*end], k2->millis - k1->millis, en,
                       g.node(en).text_prop(prop::UID)});
    }
    std::sort(all.begin(), all.end(), [](const DurationResult& a, const DurationResult& b) {
        return a.entityUid < b.entityUid;
    });
    if (mode == DurationMode::All || all.empty()) return all;

    // Extremum with ties broken toward the smaller entity uID; the list is
    // already uID-sorted, so the first hit wins.
    const DurationResult* best = &all.front();
    for (const auto& r : all) {
        if (mode == DurationMode::Max ? r.elapsedMillis > best->elapsedMillis
                                      : r.elapsedMillis < best->elapsedMillis)
            best = &r;
    }
    return {*best};
}

// Q6a: parent entities for which at least minCount distinct child entities
// show a direct DF edge fromActivity -> toActivity whose endpoint events are
// also correlated to the parent.
inline std::set<std::string> entities_with_df_pattern(const LabeledPropertyGraph& g,
                                                      const std::string& childType,
                                                      const std::string& fromActivity,
                                                      const std::string& toActivity,
                                                      const std::string& parentType,
                                                      std::size_t minCount) {
    query_detail::require_type(g, childType);
    query_detail::require_type(g, parentType);

    // parent uid -> distinct child uids exhibiting the edge under it
    std::map<std::string, std::set<std::string>> hits;
    g.for_each_relationship([&](const Relationship& r) {
        if (r.relType != rel::DF) return;
        if (r.text_prop(prop::EntityType) != childType) return;
        if (!query_detail::activity_is(g, r.source, fromActivity)) return;
        if (!query_detail::activity_is(g, r.target, toActivity)) return;
        auto ents1 = correlated_entities(g, r.source);
        auto ents2 = correlated_entities(g, r.target);
        std::vector<NodeRef> shared;
        std::set_intersection(ents1.begin(), ents1.end(), ents2.begin(), ents2.end(),
                              std::back_inserter(shared));
        std::vector<std::string> children, parents;
        for (NodeRef en : shared) {
            const Node& n = g.node(en);
            if (n.text_prop(prop::EntityType) == childType) children.push_back(n.text_prop(prop::UID));
            if (n.text_prop(prop::EntityType) == parentType) parents.push_back(n.text_prop(prop::UID));
        }
        for (const auto& p : parents)
            for (const auto& c : children) hits[p].insert(c);
    });

    std::set<std::string> out;
    for (auto& [parent, children] : hits)
        if (children.size() >= minCount) out.insert(parent);
    return out;
}

// Q6b: one path per target event, from the parent's first fromActivity event
// to that target, along the parent's chain.
inline std::vector<EventPath> paths_in_parent(const LabeledPropertyGraph& g,
                                              const std::string& parentUid,
                                              const std::string& fromActivity,
                                              const std::set<NodeRef>& targets) {
    NodeRef parent = query_detail::require_entity(g, parentUid);
    const std::string type = g.node(parent).text_prop(prop::EntityType);
    auto chain = query_detail::chain_of_entity(g, parent, type);

    std::optional<std::size_t> start;
    for (std::size_t i = 0; i < chain.events.size(); ++i)
        if (query_detail::activity_is(g, chain.events[i], fromActivity)) {
            start = i;
            break;
        }
    std::vector<EventPath> out;
    if (!start) return out;
    for (NodeRef target : targets) {
        for (std::size_t j = *start + 1; j < chain.events.size(); ++j) {
            if (chain.events[j] != target) continue;
            EventPath path;
            path.entityType = type;
            path.entityUid = parentUid;
            path.events.assign(chain.events.begin() + *start, chain.events.begin() + j + 1);
            path.rels.assign(chain.rels.begin() + *start, chain.rels.begin() + j);
            out.push_back(std::move(path));
            break;
        }
    }
    return out;
}

}  // namespace ekg
