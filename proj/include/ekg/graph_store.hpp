#pragma once

// In-memory labeled property graph. Nodes and relationships get opaque refs
// that increase monotonically in creation order and are never reused; that
// creation order doubles as the import-order tie-breaker for event sorting,
// so nothing here may renumber. Reads over a finished graph are lock-free and
// const; all mutation happens single-threaded during build phases.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ekg/errors.hpp"
#include "ekg/property_value.hpp"

namespace ekg {

struct NodeRef {
    std::uint64_t value = 0;
    friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

struct RelRef {
    std::uint64_t value = 0;
    friend auto operator<=>(const RelRef&, const RelRef&) = default;
};

// Sorted key/value pairs; small and cheap to scan, deterministic to iterate.
class PropertyMap {
public:
    using Entry = std::pair<std::string, PropertyValue>;

    PropertyMap() = default;
    PropertyMap(std::initializer_list<Entry> init) {
        for (auto& e : init) set(e.first, e.second);
    }

    const PropertyValue* find(const std::string& key) const {
        auto it = lower_bound(key);
        if (it != entries_.end() && it->first == key) return &it->second;
        return nullptr;
    }

    void set(const std::string& key, PropertyValue value) {
        auto it = lower_bound(key);
        if (it != entries_.end() && it->first == key)
            it->second = std::move(value);
        else
            entries_.insert(it, {key, std::move(value)});
    }

    bool contains(const std::string& key) const { return find(key) != nullptr; }
    std::size_t size() const { return entries_.size(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    friend bool operator==(const PropertyMap&, const PropertyMap&) = default;

private:
    std::vector<Entry>::const_iterator lower_bound(const std::string& key) const {
        return std::lower_bound(entries_.begin(), entries_.end(), key,
                                [](const Entry& e, const std::string& k) { return e.first < k; });
    }
    std::vector<Entry>::iterator lower_bound(const std::string& key) {
        return std::lower_bound(entries_.begin(), entries_.end(), key,
                                [](const Entry& e, const std::string& k) { return e.first < k; });
    }
    std::vector<Entry> entries_;
};

struct Node {
    NodeRef ref;
    std::vector<std::string> labels;  // sorted, unique, non-empty
    PropertyMap properties;

    bool has_label(const std::string& l) const {
        return std::binary_search(labels.begin(), labels.end(), l);
    }
    const PropertyValue* prop(const std::string& key) const { return properties.find(key); }
    // Convenience for the common "text property or empty" lookup.
    std::string text_prop(const std::string& key) const {
        const PropertyValue* v = properties.find(key);
        return v && v->is_text() ? v->text() : std::string{};
    }
};

struct Relationship {
    RelRef ref;
    NodeRef source;
    NodeRef target;
    std::string relType;  // exactly one
    PropertyMap properties;

    const PropertyValue* prop(const std::string& key) const { return properties.find(key); }
    std::string text_prop(const std::string& key) const {
        const PropertyValue* v = properties.find(key);
        return v && v->is_text() ? v->text() : std::string{};
    }
};

enum class Direction { Out, In, Both };

struct PropPredicate {
    std::string key;
    Cmp cmp = Cmp::Eq;
    PropertyValue value;
};

struct IndexDef {
    std::string label;
    std::string key;
    bool unique = false;
    friend auto operator<=>(const IndexDef&, const IndexDef&) = default;
};

class LabeledPropertyGraph {
public:
    // ---- mutation ----

    NodeRef add_node(const std::vector<std::string>& labels, PropertyMap properties) {
        std::vector<std::string> ls(labels);
        std::sort(ls.begin(), ls.end());
        ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
        if (ls.empty()) throw EmptyLabelsError();

        // Unique indexes veto the insert before anything is modified.
        for (auto& [def, data] : indexes_) {
            if (!def.unique) continue;
            if (!std::binary_search(ls.begin(), ls.end(), def.label)) continue;
            const PropertyValue* v = properties.find(def.key);
            if (!v) continue;
            auto hit = data.find(*v);
            if (hit != data.end() && !hit->second.empty())
                throw UniquenessViolation(def.label, def.key, v->to_string());
        }

        NodeRef ref{next_node_};
        Node node{ref, std::move(ls), std::move(properties)};
        for (const auto& l : node.labels) label_index_[l].push_back(ref);
        for (auto& [def, data] : indexes_) {
            if (!node.has_label(def.label)) continue;
            const PropertyValue* v = node.prop(def.key);
            if (v) data[*v].push_back(ref);
        }
        nodes_.push_back(std::move(node));
        out_.emplace_back();
        in_.emplace_back();
        ++next_node_;
        return ref;
    }

    RelRef add_relationship(NodeRef source, NodeRef target, std::string relType,
                            PropertyMap properties) {
        if (!has_node(source)) throw DanglingEndpoint(source.value);
        if (!has_node(target)) throw DanglingEndpoint(target.value);
        RelRef ref{next_rel_};
        rels_.emplace_back(Relationship{ref, source, target, std::move(relType),
                                        std::move(properties)});
        out_[source.value - 1].push_back(ref);
        in_[target.value - 1].push_back(ref);
        ++next_rel_;
        ++live_rels_;
        return ref;
    }

    // Used by aggregation rebuilds; refs are never reused.
    void remove_relationship(RelRef ref) {
        Relationship& r = mutable_relationship(ref);
        auto erase_from = [&](std::vector<RelRef>& v) {
            v.erase(std::remove(v.begin(), v.end(), ref), v.end());
        };
        erase_from(out_[r.source.value - 1]);
        erase_from(in_[r.target.value - 1]);
        rels_[ref.value - 1].reset();
        --live_rels_;
    }

    void ensure_index(const std::string& label, const std::string& key, bool unique) {
        IndexDef def{label, key, unique};
        auto it = indexes_.find(def);
        if (it != indexes_.end()) return;
        // Drop a non-unique twin when upgrading, and vice versa: one index per
        // (label,key).
        indexes_.erase(IndexDef{label, key, !unique});
        IndexData data;
        for (NodeRef ref : refs_with_label(label)) {
            const PropertyValue* v = node(ref).prop(key);
            if (!v) continue;
            auto& slot = data[*v];
            if (unique && !slot.empty())
                throw UniquenessViolation(label, key, v->to_string());
            slot.push_back(ref);
        }
        indexes_.emplace(def, std::move(data));
    }

    // ---- lookup ----

    bool has_node(NodeRef ref) const { return ref.value >= 1 && ref.value <= nodes_.size(); }

    bool has_relationship(RelRef ref) const {
        return ref.value >= 1 && ref.value <= rels_.size() && rels_[ref.value - 1].has_value();
    }

    const Node& node(NodeRef ref) const {
        if (!has_node(ref)) throw UnknownNode(ref.value);
        return nodes_[ref.value - 1];
    }

    const Relationship& relationship(RelRef ref) const {
        if (!has_relationship(ref)) throw UnknownRelationship(ref.value);
        return *rels_[ref.value - 1];
    }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t relationship_count() const { return live_rels_; }

    // All nodes carrying the label that satisfy every predicate conjunct.
    // Served from an index when one covers (label, key) of an '=' conjunct,
    // otherwise by label scan; results are identical either way and sorted.
    std::vector<NodeRef> find_nodes(const std::string& label,
                                    const std::vector<PropPredicate>& predicates = {}) const {
        const std::vector<NodeRef>* seed = nullptr;
        std::vector<NodeRef> from_index;
        std::size_t seed_pred = predicates.size();
        for (std::size_t i = 0; i < predicates.size(); ++i) {
            if (predicates[i].cmp != Cmp::Eq) continue;
            const IndexData* data = index_for(label, predicates[i].key);
            if (!data) continue;
            auto hit = data->find(predicates[i].value);
            if (hit != data->end()) from_index = hit->second;
            seed = &from_index;
            seed_pred = i;
            break;
        }

        std::vector<NodeRef> result;
        const std::vector<NodeRef>& candidates = seed ? *seed : refs_with_label(label);
        for (NodeRef ref : candidates) {
            const Node& n = nodes_[ref.value - 1];
            bool ok = true;
            for (std::size_t i = 0; i < predicates.size(); ++i) {
                if (i == seed_pred) continue;
                const PropertyValue* v = n.prop(predicates[i].key);
                if (!v) {  // absent property never matches
                    ok = false;
                    break;
                }
                if (!apply_cmp(*v, predicates[i].cmp, predicates[i].value)) {
                    ok = false;
                    break;
                }
            }
            if (ok) result.push_back(ref);
        }
        std::sort(result.begin(), result.end());
        return result;
    }

    // Incident relationships with the neighbor on the far side, ordered by
    // RelRef. Direction::Both lists a self-loop twice (once per side).
    std::vector<std::pair<RelRef, NodeRef>> neighbors(
        NodeRef ref, Direction dir, const std::optional<std::string>& relType = {}) const {
        if (!has_node(ref)) throw UnknownNode(ref.value);
        std::vector<std::pair<RelRef, NodeRef>> result;
        auto append = [&](const std::vector<RelRef>& side, bool outgoing) {
            for (RelRef r : side) {
                const Relationship& rel = *rels_[r.value - 1];
                if (relType && rel.relType != *relType) continue;
                result.emplace_back(r, outgoing ? rel.target : rel.source);
            }
        };
        if (dir == Direction::Out || dir == Direction::Both) append(out_[ref.value - 1], true);
        if (dir == Direction::In || dir == Direction::Both) append(in_[ref.value - 1], false);
        std::sort(result.begin(), result.end());
        return result;
    }

    const std::vector<NodeRef>& refs_with_label(const std::string& label) const {
        static const std::vector<NodeRef> kEmpty;
        auto it = label_index_.find(label);
        return it == label_index_.end() ? kEmpty : it->second;
    }

    bool has_index(const std::string& label, const std::string& key) const {
        return index_for(label, key) != nullptr;
    }

    std::vector<IndexDef> index_defs() const {
        std::vector<IndexDef> defs;
        for (const auto& [def, data] : indexes_) defs.push_back(def);
        return defs;
    }

    template <typename Fn>
    void for_each_node(Fn&& fn) const {
        for (const Node& n : nodes_) fn(n);
    }

    template <typename Fn>
    void for_each_relationship(Fn&& fn) const {
        for (const auto& r : rels_)
            if (r) fn(*r);
    }

    // Census helpers for summaries and stats output.
    std::map<std::string, std::size_t> nodes_by_label() const {
        std::map<std::string, std::size_t> out;
        for (const auto& [label, refs] : label_index_) out[label] = refs.size();
        return out;
    }

    std::map<std::string, std::size_t> relationships_by_type() const {
        std::map<std::string, std::size_t> out;
        for_each_relationship([&](const Relationship& r) { ++out[r.relType]; });
        return out;
    }

    // Snapshot IO needs the raw allocation counters.
    std::uint64_t next_node_ref() const { return next_node_; }
    std::uint64_t next_rel_ref() const { return next_rel_; }

    // Restores a relationship at an explicit ref; only for snapshot load.
    void restore_relationship(RelRef ref, NodeRef source, NodeRef target, std::string relType,
                              PropertyMap properties) {
        if (!has_node(source)) throw DanglingEndpoint(source.value);
        if (!has_node(target)) throw DanglingEndpoint(target.value);
        if (rels_.size() < ref.value) rels_.resize(ref.value);
        if (rels_[ref.value - 1]) throw SnapshotError("duplicate relationship ref");
        rels_[ref.value - 1] =
            Relationship{ref, source, target, std::move(relType), std::move(properties)};
        out_[source.value - 1].push_back(ref);
        in_[target.value - 1].push_back(ref);
        ++live_rels_;
        if (ref.value >= next_rel_) next_rel_ = ref.value + 1;
    }

    void set_next_rel_ref(std::uint64_t v) { next_rel_ = v; }

private:
    using IndexData = std::map<PropertyValue, std::vector<NodeRef>, PropertyValueStructLess>;

    const IndexData* index_for(const std::string& label, const std::string& key) const {
        for (bool unique : {false, true}) {
            auto it = indexes_.find(IndexDef{label, key, unique});
            if (it != indexes_.end()) return &it->second;
        }
        return nullptr;
    }

    Relationship& mutable_relationship(RelRef ref) {
        if (!has_relationship(ref)) throw UnknownRelationship(ref.value);
        return *rels_[ref.value - 1];
    }

    std::vector<Node> nodes_;                          // ref 1..N, dense
    std::vector<std::optional<Relationship>> rels_;    // ref 1..M, tombstoned on removal
    std::vector<std::vector<RelRef>> out_;             // per node, ascending RelRef
    std::vector<std::vector<RelRef>> in_;
    std::map<std::string, std::vector<NodeRef>> label_index_;
    std::map<IndexDef, IndexData> indexes_;
    std::uint64_t next_node_ = 1;
    std::uint64_t next_rel_ = 1;
    std::size_t live_rels_ = 0;
};

}  // namespace ekg
