#pragma once

// DOT and GraphML exporters over a selected subgraph. Output is a pure
// function of the selection: nodes ascending by ref, edges ascending by ref,
// properties in key order, so identical graphs export byte-identically.

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ekg/aggregate.hpp"
#include "ekg/event_model.hpp"
#include "ekg/graph_store.hpp"

namespace ekg {

struct ExportSelection {
    enum class Scope { Full, Entity, EntityTypes, Aggregated };
    Scope scope = Scope::Full;
    std::string entityUid;                 // Scope::Entity
    std::vector<std::string> entityTypes;  // Scope::EntityTypes / Aggregated
    std::string classType;                 // Scope::Aggregated
    std::int64_t minCount = 1;             // Scope::Aggregated
    std::optional<std::set<std::string>> includeNodeKinds;  // semantic labels to keep
    std::optional<std::set<std::string>> includeRelTypes;

    static ExportSelection full() { return {}; }
    static ExportSelection entity(std::string uid) {
        ExportSelection s;
        s.scope = Scope::Entity;
        s.entityUid = std::move(uid);
        return s;
    }
    static ExportSelection entity_types(std::vector<std::string> types) {
        ExportSelection s;
        s.scope = Scope::EntityTypes;
        s.entityTypes = std::move(types);
        return s;
    }
    static ExportSelection aggregated(std::string classType, std::vector<std::string> types,
                                      std::int64_t minCount = 1) {
        ExportSelection s;
        s.scope = Scope::Aggregated;
        s.classType = std::move(classType);
        s.entityTypes = std::move(types);
        s.minCount = minCount;
        return s;
    }
};

struct SubgraphView {
    std::vector<NodeRef> nodes;  // ascending
    std::vector<RelRef> rels;    // ascending
};

namespace export_detail {

inline void apply_node_filter(const LabeledPropertyGraph& g, const ExportSelection& sel,
                              SubgraphView& view);

inline SubgraphView resolve(const LabeledPropertyGraph& g, const ExportSelection& sel) {
    std::set<std::uint64_t> node_set;
    std::set<std::string> df_types;  // when non-empty, DF edges restrict to these
    bool restrict_df = false;

    switch (sel.scope) {
        case ExportSelection::Scope::Full:
            g.for_each_node([&](const Node& n) { node_set.insert(n.ref.value); });
            break;
        case ExportSelection::Scope::Entity: {
            auto en = entity_by_uid(g, sel.entityUid);
            if (!en) throw UnknownSelection("no entity with uID '" + sel.entityUid + "'");
            node_set.insert(en->value);
            for (NodeRef ev : correlated_events(g, *en)) node_set.insert(ev.value);
            df_types.insert(g.node(*en).text_prop(prop::EntityType));
            restrict_df = true;
            break;
        }
        case ExportSelection::Scope::EntityTypes: {
            for (const auto& type : sel.entityTypes) {
                auto ents = entities_of_type(g, type);
                if (ents.empty()) throw UnknownSelection("no entities of type '" + type + "'");
                for (NodeRef en : ents) {
                    node_set.insert(en.value);
                    for (NodeRef ev : correlated_events(g, en)) node_set.insert(ev.value);
                }
                df_types.insert(type);
            }
            restrict_df = true;
            break;
        }
        case ExportSelection::Scope::Aggregated: {
            auto view = filter_by_count(aggregated_view(g, sel.classType, sel.entityTypes),
                                        sel.minCount);
            SubgraphView out;
            std::set<std::uint64_t> rels;
            for (const auto& c : view.classes) node_set.insert(c.ref.value);
            for (const auto& e : view.edges) rels.insert(e.rel.value);
            for (std::uint64_t v : node_set) out.nodes.push_back(NodeRef{v});
            for (std::uint64_t v : rels) out.rels.push_back(RelRef{v});
            apply_node_filter(g, sel, out);
            return out;
        }
    }

    SubgraphView out;
    for (std::uint64_t v : node_set) out.nodes.push_back(NodeRef{v});
    g.for_each_relationship([&](const Relationship& r) {
        if (!node_set.count(r.source.value) || !node_set.count(r.target.value)) return;
        if (restrict_df && r.relType == rel::DF &&
            !df_types.count(r.text_prop(prop::EntityType)))
            return;
        out.rels.push_back(r.ref);
    });
    apply_node_filter(g, sel, out);
    return out;
}

inline void apply_node_filter(const LabeledPropertyGraph& g, const ExportSelection& sel,
                              SubgraphView& view) {
    if (sel.includeNodeKinds) {
        std::vector<NodeRef> kept;
        for (NodeRef ref : view.nodes) {
            const Node& n = g.node(ref);
            for (const auto& kind : *sel.includeNodeKinds)
                if (n.has_label(kind)) {
                    kept.push_back(ref);
                    break;
                }
        }
        view.nodes = std::move(kept);
    }
    std::set<std::uint64_t> node_set;
    for (NodeRef ref : view.nodes) node_set.insert(ref.value);
    std::vector<RelRef> kept;
    for (RelRef ref : view.rels) {
        const Relationship& r = g.relationship(ref);
        if (!node_set.count(r.source.value) || !node_set.count(r.target.value)) continue;
        if (sel.includeRelTypes && !sel.includeRelTypes->count(r.relType)) continue;
        kept.push_back(ref);
    }
    view.rels = std::move(kept);
}

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string node_shape(const Node& n) {
    if (n.has_label(label::Event)) return "box";
    if (n.has_label(label::Entity)) return "ellipse";
    if (n.has_label(label::Class)) return "hexagon";
    if (n.has_label(label::Log)) return "note";
    return "plaintext";
}

inline std::string node_caption(const Node& n) {
    if (n.has_label(label::Event)) return n.text_prop(prop::Activity);
    if (n.has_label(label::Entity)) return n.text_prop(prop::UID);
    if (n.has_label(label::Class)) return n.text_prop(prop::ID);
    if (n.has_label(label::Log)) return n.text_prop(prop::ID);
    return n.labels.empty() ? "" : n.labels.front();
}

inline std::string edge_caption(const Relationship& r) {
    if (r.relType == rel::DF) return r.text_prop(prop::EntityType);
    if (r.relType == rel::DF_C) {
        const PropertyValue* count = r.prop(prop::Count);
        std::string c = count ? count->to_string() : "?";
        return r.text_prop(prop::EntityType) + " (" + c + ")";
    }
    return r.relType;
}

}  // namespace export_detail

inline std::string export_dot_string(const LabeledPropertyGraph& g, const ExportSelection& sel) {
    using namespace export_detail;
    SubgraphView view = resolve(g, sel);
    std::ostringstream os;
    os << "digraph ekg {\n";
    os << "  rankdir=LR;\n";
    for (NodeRef ref : view.nodes) {
        const Node& n = g.node(ref);
        os << "  n" << ref.value << " [shape=" << node_shape(n) << ", label=\""
           << dot_escape(node_caption(n)) << "\"];\n";
    }
    for (RelRef ref : view.rels) {
        const Relationship& r = g.relationship(ref);
        os << "  n" << r.source.value << " -> n" << r.target.value << " [label=\""
           << dot_escape(edge_caption(r)) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

inline std::string export_graphml_string(const LabeledPropertyGraph& g,
                                         const ExportSelection& sel) {
    using namespace export_detail;
    SubgraphView view = resolve(g, sel);

    // Collect property keys and their GraphML types; clashes degrade to
    // string.
    auto type_name = [](PropertyValue::Kind k) {
        switch (k) {
            case PropertyValue::Kind::Integer: return "long";
            case PropertyValue::Kind::Float: return "double";
            case PropertyValue::Kind::Boolean: return "boolean";
            default: return "string";
        }
    };
    std::map<std::pair<std::string, std::string>, std::string> keys;  // (for, name) -> type
    auto note = [&](const std::string& domain, const std::string& name, PropertyValue::Kind k) {
        auto it = keys.find({domain, name});
        std::string t = type_name(k);
        if (it == keys.end())
            keys[{domain, name}] = t;
        else if (it->second != t)
            it->second = "string";
    };
    for (NodeRef ref : view.nodes)
        for (const auto& [k, v] : g.node(ref).properties) note("node", k, v.kind());
    for (RelRef ref : view.rels)
        for (const auto& [k, v] : g.relationship(ref).properties) note("edge", k, v.kind());

    std::map<std::pair<std::string, std::string>, std::string> key_ids;
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    os << "  <key id=\"labels\" for=\"node\" attr.name=\"labels\" attr.type=\"string\"/>\n";
    os << "  <key id=\"relType\" for=\"edge\" attr.name=\"relType\" attr.type=\"string\"/>\n";
    std::size_t next_id = 0;
    for (const auto& [fk, type] : keys) {
        std::string id = "d" + std::to_string(next_id++);
        key_ids[fk] = id;
        os << "  <key id=\"" << id << "\" for=\"" << fk.first << "\" attr.name=\""
           << xml_escape(fk.second) << "\" attr.type=\"" << type << "\"/>\n";
    }
    os << "  <graph id=\"G\" edgedefault=\"directed\">\n";
    for (NodeRef ref : view.nodes) {
        const Node& n = g.node(ref);
        os << "    <node id=\"n" << ref.value << "\">";
        std::string labels;
        for (std::size_t i = 0; i < n.labels.size(); ++i)
            labels += (i ? ";" : "") + n.labels[i];
        os << "<data key=\"labels\">" << xml_escape(labels) << "</data>";
        for (const auto& [k, v] : n.properties)
            os << "<data key=\"" << key_ids[{"node", k}] << "\">" << xml_escape(v.to_string())
               << "</data>";
        os << "</node>\n";
    }
    for (RelRef ref : view.rels) {
        const Relationship& r = g.relationship(ref);
        os << "    <edge id=\"e" << ref.value << "\" source=\"n" << r.source.value
           << "\" target=\"n" << r.target.value << "\">";
        os << "<data key=\"relType\">" << xml_escape(r.relType) << "</data>";
        for (const auto& [k, v] : r.properties)
            os << "<data key=\"" << key_ids[{"edge", k}] << "\">" << xml_escape(v.to_string())
               << "</data>";
        os << "</edge>\n";
    }
    os << "  </graph>\n";
    os << "</graphml>\n";
    return os.str();
}

inline void export_dot(const LabeledPropertyGraph& g, const ExportSelection& sel,
                       const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << export_dot_string(g, sel);
    if (!os) throw IoError("write failed: " + path);
}

inline void export_graphml(const LabeledPropertyGraph& g, const ExportSelection& sel,
                           const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << export_graphml_string(g, sel);
    if (!os) throw IoError("write failed: " + path);
}

}  // namespace ekg
