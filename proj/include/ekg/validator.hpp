#pragma once

// Checks a graph against the semantic constraint families of the event model:
//   V1 strict typing of semantic labels and role well-formedness
//   V2 event-entity correlation (unique pair, total both ways)
//   V3 directly-follows (typing, same log, time order, witness, irreflexive,
//      acyclic)
//   V4 log membership (exactly one log per event, no empty logs)
//   V5 event-class links (at least one class, one per class type)
//   V6 class-level directly-follows (same type, count, event-level witness)
//
// V5 and V6 only apply once any Class node exists; before aggregation a graph
// legitimately has no classes. The validator never throws on malformed
// structure: everything is reported.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "ekg/event_model.hpp"
#include "ekg/graph_store.hpp"

namespace ekg {

enum class Family { V1 = 1, V2, V3, V4, V5, V6 };

inline std::string family_name(Family f) {
    return "V" + std::to_string(static_cast<int>(f));
}

inline std::optional<Family> family_from_string(const std::string& s) {
    if (s.size() == 2 && (s[0] == 'V' || s[0] == 'v') && s[1] >= '1' && s[1] <= '6')
        return static_cast<Family>(s[1] - '0');
    return std::nullopt;
}

inline const std::set<Family> kAllFamilies = {Family::V1, Family::V2, Family::V3,
                                              Family::V4, Family::V5, Family::V6};

struct Violation {
    Family family = Family::V1;
    int constraint = 0;
    std::vector<NodeRef> nodes;
    std::vector<RelRef> rels;
    std::string message;

    friend bool operator<(const Violation& a, const Violation& b) {
        return std::tie(a.family, a.constraint, a.rels, a.nodes, a.message) <
               std::tie(b.family, b.constraint, b.rels, b.nodes, b.message);
    }
};

struct ViolationReport {
    std::vector<Violation> violations;
    std::vector<Violation> warnings;  // downgraded findings, e.g. cross-log DF

    bool empty() const { return violations.empty(); }
    std::size_t count(Family f) const {
        std::size_t n = 0;
        for (const auto& v : violations) n += v.family == f;
        return n;
    }

    void normalize() {
        std::sort(violations.begin(), violations.end());
        std::sort(warnings.begin(), warnings.end());
    }

    std::string to_text() const {
        std::ostringstream os;
        auto emit = [&](const Violation& v, const char* tag) {
            os << tag << family_name(v.family) << "." << v.constraint;
            os << " nodes=[";
            for (std::size_t i = 0; i < v.nodes.size(); ++i)
                os << (i ? "," : "") << v.nodes[i].value;
            os << "] rels=[";
            for (std::size_t i = 0; i < v.rels.size(); ++i)
                os << (i ? "," : "") << v.rels[i].value;
            os << "] " << v.message << "\n";
        };
        for (const auto& v : violations) emit(v, "");
        for (const auto& w : warnings) emit(w, "warning ");
        return os.str();
    }

    // One JSON object per line.
    std::string to_json_lines() const {
        std::ostringstream os;
        auto escape = [](const std::string& s) {
            std::string out;
            for (char c : s) {
                switch (c) {
                    case '"': out += "\\\""; break;
                    case '\\': out += "\\\\"; break;
                    case '\n': out += "\\n"; break;
                    case '\t': out += "\\t"; break;
                    default: out += c;
                }
            }
            return out;
        };
        auto emit = [&](const Violation& v, bool warning) {
            os << "{\"family\":\"" << family_name(v.family) << "\",\"constraint\":" << v.constraint
               << ",\"nodeRefs\":[";
            for (std::size_t i = 0; i < v.nodes.size(); ++i)
                os << (i ? "," : "") << v.nodes[i].value;
            os << "],\"relRefs\":[";
            for (std::size_t i = 0; i < v.rels.size(); ++i)
                os << (i ? "," : "") << v.rels[i].value;
            os << "],\"message\":\"" << escape(v.message) << "\"";
            if (warning) os << ",\"warning\":true";
            os << "}\n";
        };
        for (const auto& v : violations) emit(v, false);
        for (const auto& w : warnings) emit(w, true);
        return os.str();
    }
};

struct ValidationOptions {
    // When cross-log DF derivation was deliberately enabled, same-log
    // breaches are reported as warnings instead of violations.
    bool crossLogDfAsWarning = false;
};

// One witness cycle over the union of all DF edges, or nothing if the union
// is acyclic. Self-loops count as cycles of length one.
inline std::optional<std::vector<RelRef>> acyclicity_check(const LabeledPropertyGraph& g) {
    // Adjacency restricted to DF, deterministic by construction order.
    std::map<std::uint64_t, std::vector<RelRef>> adj;
    std::optional<RelRef> self_loop;
    g.for_each_relationship([&](const Relationship& r) {
        if (r.relType != rel::DF) return;
        if (r.source == r.target && !self_loop) self_loop = r.ref;
        adj[r.source.value].push_back(r.ref);
    });
    if (self_loop) return std::vector<RelRef>{*self_loop};

    constexpr std::uint8_t White = 0, Grey = 1, Black = 2;
    std::map<std::uint64_t, std::uint8_t> color;
    std::vector<RelRef> stack;  // rels on the current DFS path

    // Iterative DFS; frame = (node, next edge position).
    std::function<std::optional<std::vector<RelRef>>(std::uint64_t)> dfs =
        [&](std::uint64_t start) -> std::optional<std::vector<RelRef>> {
        std::vector<std::pair<std::uint64_t, std::size_t>> frames{{start, 0}};
        color[start] = Grey;
        while (!frames.empty()) {
            auto& [node, pos] = frames.back();
            auto it = adj.find(node);
            if (it == adj.end() || pos >= it->second.size()) {
                color[node] = Black;
                frames.pop_back();
                if (!stack.empty()) stack.pop_back();
                continue;
            }
            RelRef edge = it->second[pos++];
            std::uint64_t next = g.relationship(edge).target.value;
            std::uint8_t c = color.count(next) ? color[next] : White;
            if (c == Grey) {
                // Back edge: slice the cycle out of the path.
                stack.push_back(edge);
                std::vector<RelRef> cycle;
                bool in_cycle = false;
                for (RelRef r : stack) {
                    if (g.relationship(r).source.value == next) in_cycle = true;
                    if (in_cycle) cycle.push_back(r);
                }
                return cycle;
            }
            if (c == White) {
                color[next] = Grey;
                stack.push_back(edge);
                frames.emplace_back(next, 0);
            }
        }
        return std::nullopt;
    };

    for (const auto& [node, edges] : adj) {
        std::uint8_t c = color.count(node) ? color[node] : White;
        if (c != White) continue;
        stack.clear();
        if (auto cycle = dfs(node)) return cycle;
    }
    return std::nullopt;
}

namespace validator_detail {

struct Ctx {
    const LabeledPropertyGraph& g;
    ViolationReport& report;
    const ValidationOptions& options;

    void add(Family f, int c, std::vector<NodeRef> nodes, std::vector<RelRef> rels,
             std::string msg, bool warning = false) {
        Violation v{f, c, std::move(nodes), std::move(rels), std::move(msg)};
        (warning ? report.warnings : report.violations).push_back(std::move(v));
    }

    std::optional<std::string> semantic_label(const Node& n) const {
        std::optional<std::string> found;
        for (const auto& l : n.labels)
            if (is_semantic_node_label(l)) {
                if (found) return std::nullopt;  // ambiguous; V1 reports it
                found = l;
            }
        return found;
    }
};

inline void check_v1(Ctx& ctx) {
    const LabeledPropertyGraph& g = ctx.g;
    std::map<std::string, std::vector<NodeRef>> entity_uids;
    std::map<std::string, std::vector<NodeRef>> log_ids;
    std::map<std::pair<std::string, std::string>, std::vector<NodeRef>> class_keys;

    g.for_each_node([&](const Node& n) {
        int semantic = 0;
        for (const auto& l : n.labels) {
            if (is_semantic_node_label(l)) ++semantic;
            if (is_semantic_rel_type(l))
                ctx.add(Family::V1, 2, {n.ref}, {},
                        "node carries relationship type '" + l + "' as label");
        }
        if (semantic > 1)
            ctx.add(Family::V1, 1, {n.ref}, {}, "node has more than one semantic label");

        if (n.has_label(label::Event)) {
            const PropertyValue* act = n.prop(prop::Activity);
            if (!act || !act->is_text() || act->text().empty())
                ctx.add(Family::V1, 4, {n.ref}, {}, "Event lacks a non-empty Activity");
            const PropertyValue* ts = n.prop(prop::Timestamp);
            if (!ts || ts->kind() != PropertyValue::Kind::Time)
                ctx.add(Family::V1, 4, {n.ref}, {}, "Event lacks a Timestamp");
        }
        if (n.has_label(label::Entity)) {
            std::string type = n.text_prop(prop::EntityType);
            std::string id = n.text_prop(prop::ID);
            std::string uid = n.text_prop(prop::UID);
            if (type.empty() || id.empty() || uid.empty()) {
                ctx.add(Family::V1, 5, {n.ref}, {},
                        "Entity lacks EntityType/ID/uID");
            } else if (uid != type + id && uid != type + "_" + id) {
                // Composite entities join type and id with an underscore.
                ctx.add(Family::V1, 5, {n.ref}, {},
                        "Entity uID '" + uid + "' does not equal EntityType+ID");
            }
            if (!uid.empty()) entity_uids[uid].push_back(n.ref);
        }
        if (n.has_label(label::Log)) {
            std::string id = n.text_prop(prop::ID);
            if (id.empty())
                ctx.add(Family::V1, 6, {n.ref}, {}, "Log lacks an ID");
            else
                log_ids[id].push_back(n.ref);
        }
        if (n.has_label(label::Class)) {
            std::string type = n.text_prop(prop::Type);
            std::string id = n.text_prop(prop::ID);
            if (type.empty() || id.empty())
                ctx.add(Family::V1, 7, {n.ref}, {}, "Class lacks Type/ID");
            else
                class_keys[{type, id}].push_back(n.ref);
        }
    });

    g.for_each_relationship([&](const Relationship& r) {
        if (is_semantic_node_label(r.relType))
            ctx.add(Family::V1, 3, {}, {r.ref},
                    "relationship carries node label '" + r.relType + "' as type");
    });

    for (auto& [uid, refs] : entity_uids)
        if (refs.size() > 1)
            ctx.add(Family::V1, 5, refs, {}, "duplicate Entity uID '" + uid + "'");
    for (auto& [id, refs] : log_ids)
        if (refs.size() > 1)
            ctx.add(Family::V1, 6, refs, {}, "duplicate Log ID '" + id + "'");
    for (auto& [key, refs] : class_keys)
        if (refs.size() > 1)
            ctx.add(Family::V1, 7, refs, {},
                    "duplicate Class (" + key.first + "," + key.second + ")");
}

inline void check_v2(Ctx& ctx) {
    const LabeledPropertyGraph& g = ctx.g;
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    std::set<std::uint64_t> events_with_entity;
    std::set<std::uint64_t> entities_with_event;

    g.for_each_relationship([&](const Relationship& r) {
        if (r.relType != rel::E_EN) return;
        bool src_event = g.node(r.source).has_label(label::Event);
        bool tgt_entity = g.node(r.target).has_label(label::Entity);
        if (!src_event || !tgt_entity) {
            ctx.add(Family::V2, 1, {r.source, r.target}, {r.ref},
                    "E_EN must run Event -> Entity");
            return;
        }
        if (!seen.insert({r.source.value, r.target.value}).second)
            ctx.add(Family::V2, 2, {r.source, r.target}, {r.ref},
                    "more than one E_EN between the same event and entity");
        events_with_entity.insert(r.source.value);
        entities_with_event.insert(r.target.value);
    });

    for (NodeRef ev : g.refs_with_label(label::Event))
        if (!events_with_entity.count(ev.value))
            ctx.add(Family::V2, 3, {ev}, {}, "event is correlated to no entity");
    for (NodeRef en : g.refs_with_label(label::Entity))
        if (!entities_with_event.count(en.value))
            ctx.add(Family::V2, 4, {en}, {}, "entity has no correlated event");
}

inline void check_v3(Ctx& ctx) {
    const LabeledPropertyGraph& g = ctx.g;

    // Per-entity event sets, sorted by the global ordering key, plus the key
    // vector itself so witness scans can binary-search instead of walking
    // whole chains.
    struct EntityEvents {
        std::vector<NodeRef> events;
        std::vector<OrderingKey> keys;
    };
    std::map<std::uint64_t, EntityEvents> entity_events;
    for (NodeRef en : g.refs_with_label(label::Entity)) {
        EntityEvents ee;
        ee.events = correlated_events(g, en);
        sort_by_ordering_key(g, ee.events);
        for (NodeRef ev : ee.events) {
            auto k = ordering_key(g.node(ev));
            ee.keys.push_back(k ? *k : OrderingKey{std::numeric_limits<std::int64_t>::min(), ev});
        }
        entity_events[en.value] = std::move(ee);
    }

    g.for_each_relationship([&](const Relationship& r) {
        if (r.relType != rel::DF) return;
        bool src_event = g.node(r.source).has_label(label::Event);
        bool tgt_event = g.node(r.target).has_label(label::Event);
        if (!src_event || !tgt_event) {
            ctx.add(Family::V3, 1, {r.source, r.target}, {r.ref},
                    "DF must run Event -> Event");
            return;
        }
        if (r.source == r.target) {
            ctx.add(Family::V3, 5, {r.source}, {r.ref}, "DF is irreflexive; self-loop");
            return;
        }

        auto logs1 = logs_of_event(g, r.source);
        auto logs2 = logs_of_event(g, r.target);
        std::vector<NodeRef> shared_logs;
        std::set_intersection(logs1.begin(), logs1.end(), logs2.begin(), logs2.end(),
                              std::back_inserter(shared_logs));
        if (shared_logs.empty()) {
            ctx.add(Family::V3, 2, {r.source, r.target}, {r.ref},
                    "DF endpoints share no log", ctx.options.crossLogDfAsWarning);
            if (!ctx.options.crossLogDfAsWarning) return;
        }

        auto k1 = ordering_key(g.node(r.source));
        auto k2 = ordering_key(g.node(r.target));
        if (!k1 || !k2) return;  // V1 reports the missing timestamp
        if (k1->millis > k2->millis) {
            ctx.add(Family::V3, 3, {r.source, r.target}, {r.ref},
                    "DF runs against timestamp order");
            return;
        }

        // Witness: an entity of the edge's type correlated to both endpoints
        // with no correlated event strictly between them. The intervening
        // scan stays within the logs shared by the endpoints, matching
        // per-log derivation.
        std::string type = r.text_prop(prop::EntityType);
        if (type.empty()) {
            ctx.add(Family::V3, 4, {r.source, r.target}, {r.ref},
                    "DF edge lacks an EntityType");
            return;
        }
        auto ents1 = correlated_entities(g, r.source);
        auto ents2 = correlated_entities(g, r.target);
        std::vector<NodeRef> shared;
        std::set_intersection(ents1.begin(), ents1.end(), ents2.begin(), ents2.end(),
                              std::back_inserter(shared));
        std::set<std::uint64_t> log_set;
        for (NodeRef l : shared_logs) log_set.insert(l.value);
        bool witnessed = false;
        for (NodeRef en : shared) {
            if (g.node(en).text_prop(prop::EntityType) != type) continue;
            const EntityEvents& ee = entity_events[en.value];
            bool intervening = false;
            auto it = std::upper_bound(ee.keys.begin(), ee.keys.end(), *k1);
            for (; it != ee.keys.end() && *it < *k2; ++it) {
                if (!log_set.empty()) {
                    NodeRef ev = ee.events[static_cast<std::size_t>(it - ee.keys.begin())];
                    bool in_scope = false;
                    for (NodeRef l : logs_of_event(g, ev))
                        if (log_set.count(l.value)) in_scope = true;
                    if (!in_scope) continue;
                }
                intervening = true;
                break;
            }
            if (!intervening) {
                witnessed = true;
                break;
            }
        }
        if (!witnessed)
            ctx.add(Family::V3, 4, {r.source, r.target}, {r.ref},
                    "no entity of type '" + type +
                        "' witnesses this DF edge without an intervening event");
    });

    // Acyclicity over the DF union, self-loops excluded (already reported as
    // irreflexivity breaches). One violation per strongly connected cycle
    // found.
    std::map<std::uint64_t, std::vector<RelRef>> adj;
    g.for_each_relationship([&](const Relationship& r) {
        if (r.relType == rel::DF && r.source != r.target) adj[r.source.value].push_back(r.ref);
    });
    std::set<std::uint64_t> removed;
    for (;;) {
        // Repeatedly find one cycle, report it, and drop its edges so distinct
        // cycles each get a report without enumerating the exponential set.
        std::map<std::uint64_t, std::uint8_t> color;
        std::vector<RelRef> stack;
        std::optional<std::vector<RelRef>> found;
        std::function<bool(std::uint64_t)> dfs = [&](std::uint64_t node) -> bool {
            color[node] = 1;
            auto it = adj.find(node);
            if (it != adj.end()) {
                for (RelRef e : it->second) {
                    if (removed.count(e.value)) continue;
                    std::uint64_t next = ctx.g.relationship(e).target.value;
                    std::uint8_t c = color.count(next) ? color[next] : 0;
                    if (c == 1) {
                        stack.push_back(e);
                        std::vector<RelRef> cycle;
                        bool in_cycle = false;
                        for (RelRef r2 : stack) {
                            if (ctx.g.relationship(r2).source.value == next) in_cycle = true;
                            if (in_cycle) cycle.push_back(r2);
                        }
                        found = cycle;
                        return true;
                    }
                    if (c == 0) {
                        stack.push_back(e);
                        if (dfs(next)) return true;
                        stack.pop_back();
                    }
                }
            }
            color[node] = 2;
            return false;
        };
        for (const auto& [node, edges] : adj) {
            if ((color.count(node) ? color[node] : 0) == 0) {
                stack.clear();
                if (dfs(node)) break;
            }
        }
        if (!found) break;
        std::ostringstream msg;
        msg << "DF cycle of length " << found->size();
        ctx.add(Family::V3, 6, {}, *found, msg.str());
        for (RelRef e : *found) removed.insert(e.value);
    }
}

inline void check_v4(Ctx& ctx) {
    const LabeledPropertyGraph& g = ctx.g;
    std::map<std::uint64_t, std::size_t> event_logs;
    std::set<std::uint64_t> logs_with_event;

    g.for_each_relationship([&](const Relationship& r) {
        if (r.relType != rel::L_E) return;
        bool src_log = g.node(r.source).has_label(label::Log);
        bool tgt_event = g.node(r.target).has_label(label::Event);
        if (!src_log || !tgt_event) {
            ctx.add(Family::V4, 1, {r.source, r.target}, {r.ref},
                    "L_E must run Log -> Event");
            return;
        }
        ++event_logs[r.target.value];
        logs_with_event.insert(r.source.value);
    });

    for (NodeRef ev : g.refs_with_label(label::Event)) {
        std::size_t n = event_logs.count(ev.value) ? event_logs[ev.value] : 0;
        if (n != 1)
            ctx.add(Family::V4, 2, {ev}, {},
                    "event is in " + std::to_string(n) + " logs, expected exactly 1");
    }
    for (NodeRef log : g.refs_with_label(label::Log))
        if (!logs_with_event.count(log.value))
            ctx.add(Family::V4, 3, {log}, {}, "log has no events");
}

inline void check_v5(Ctx& ctx) {
    const LabeledPropertyGraph& g = ctx.g;
    if (g.refs_with_label(label::Class).empty()) return;

    std::map<std::uint64_t, std::map<std::string, std::size_t>> per_event_types;
    std::set<std::uint64_t> events_with_class;

    g.for_each_relationship([&](const Relationship& r) {
        if (r.relType != rel::E_C) return;
        bool src_event = g.node(r.source).has_label(label::Event);
        bool tgt_class = g.node(r.target).has_label(label::Class);
        if (!src_event || !tgt_class) {
            ctx.add(Family::V5, 1, {r.source, r.target}, {r.ref},
                    "E_C must run Event -> Class");
            return;
        }
        events_with_class.insert(r.source.value);
        ++per_event_types[r.source.value][g.node(r.target).text_prop(prop::Type)];
    });

    for (NodeRef ev : g.refs_with_label(label::Event))
        if (!events_with_class.count(ev.value))
            ctx.add(Family::V5, 2, {ev}, {}, "event has no event class");
    for (auto& [ev, types] : per_event_types)
        for (auto& [type, count] : types)
            if (count > 1)
                ctx.add(Family::V5, 3, {NodeRef{ev}}, {},
                        "event has " + std::to_string(count) + " classes of type '" + type + "'");
}

inline void check_v6(Ctx& ctx) {
    const LabeledPropertyGraph& g = ctx.g;
    if (g.refs_with_label(label::Class).empty()) return;

    // Witnessed class pairs per entity type: DF edge whose endpoints share a
    // correlated entity of the edge's type and carry classes c1, c2.
    std::map<std::uint64_t, std::vector<NodeRef>> event_classes;
    g.for_each_relationship([&](const Relationship& r) {
        if (r.relType == rel::E_C && g.node(r.target).has_label(label::Class))
            event_classes[r.source.value].push_back(r.target);
    });
    std::set<std::tuple<std::string, std::uint64_t, std::uint64_t>> witnessed;
    g.for_each_relationship([&](const Relationship& r) {
        if (r.relType != rel::DF) return;
        std::string type = r.text_prop(prop::EntityType);
        if (type.empty()) return;
        auto ents1 = correlated_entities(g, r.source);
        auto ents2 = correlated_entities(g, r.target);
        std::vector<NodeRef> shared;
        std::set_intersection(ents1.begin(), ents1.end(), ents2.begin(), ents2.end(),
                              std::back_inserter(shared));
        bool same_entity = false;
        for (NodeRef en : shared)
            if (g.node(en).text_prop(prop::EntityType) == type) same_entity = true;
        if (!same_entity) return;
        for (NodeRef c1 : event_classes[r.source.value])
            for (NodeRef c2 : event_classes[r.target.value])
                witnessed.insert({type, c1.value, c2.value});
    });

    g.for_each_relationship([&](const Relationship& r) {
        if (r.relType != rel::DF_C) return;
        bool src_class = g.node(r.source).has_label(label::Class);
        bool tgt_class = g.node(r.target).has_label(label::Class);
        if (!src_class || !tgt_class) {
            ctx.add(Family::V6, 1, {r.source, r.target}, {r.ref},
                    "DF_C must run Class -> Class");
            return;
        }
        if (g.node(r.source).text_prop(prop::Type) != g.node(r.target).text_prop(prop::Type)) {
            ctx.add(Family::V6, 2, {r.source, r.target}, {r.ref},
                    "DF_C endpoints have different class types");
            return;
        }
        std::string type = r.text_prop(prop::EntityType);
        const PropertyValue* count = r.prop(prop::Count);
        if (type.empty() || !count || count->kind() != PropertyValue::Kind::Integer ||
            count->integer() < 1) {
            ctx.add(Family::V6, 3, {r.source, r.target}, {r.ref},
                    "DF_C lacks EntityType or a positive count");
            return;
        }
        if (!witnessed.count({type, r.source.value, r.target.value}))
            ctx.add(Family::V6, 4, {r.source, r.target}, {r.ref},
                    "DF_C has no event-level DF witness for type '" + type + "'");
    });
}

}  // namespace validator_detail

inline ViolationReport validate(const LabeledPropertyGraph& g,
                                const std::set<Family>& families = kAllFamilies,
                                const ValidationOptions& options = {}) {
    ViolationReport report;
    validator_detail::Ctx ctx{g, report, options};
    if (families.count(Family::V1)) validator_detail::check_v1(ctx);
    if (families.count(Family::V2)) validator_detail::check_v2(ctx);
    if (families.count(Family::V3)) validator_detail::check_v3(ctx);
    if (families.count(Family::V4)) validator_detail::check_v4(ctx);
    if (families.count(Family::V5)) validator_detail::check_v5(ctx);
    if (families.count(Family::V6)) validator_detail::check_v6(ctx);
    report.normalize();
    return report;
}

}  // namespace ekg
