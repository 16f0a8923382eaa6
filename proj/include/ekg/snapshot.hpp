#pragma once

// Versioned binary snapshot of a whole graph. Layout is little-endian and
// fully determined by the graph contents (nodes ascending, properties sorted,
// index definitions sorted), so identical graphs serialize byte-identically.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "ekg/graph_store.hpp"

namespace ekg {

namespace snapshot_detail {

inline constexpr char kMagic[8] = {'E', 'K', 'G', 'S', 'N', 'A', 'P', '1'};
inline constexpr std::uint32_t kVersion = 1;

inline void put_u8(std::ostream& os, std::uint8_t v) {
    os.put(static_cast<char>(v));
}
inline void put_u32(std::ostream& os, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 4);
}
inline void put_u64(std::ostream& os, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 8);
}
inline void put_str(std::ostream& os, const std::string& s) {
    put_u64(os, s.size());
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::uint8_t get_u8(std::istream& is) {
    int c = is.get();
    if (c == EOF) throw SnapshotError("truncated input");
    return static_cast<std::uint8_t>(c);
}
inline std::uint32_t get_u32(std::istream& is) {
    char b[4];
    if (!is.read(b, 4)) throw SnapshotError("truncated input");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
}
inline std::uint64_t get_u64(std::istream& is) {
    char b[8];
    if (!is.read(b, 8)) throw SnapshotError("truncated input");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
}
inline std::string get_str(std::istream& is) {
    // Chunked read: a corrupted length field must hit truncation, not a
    // multi-gigabyte allocation.
    std::uint64_t n = get_u64(is);
    constexpr std::uint64_t kChunk = 1 << 20;
    std::string s;
    while (n > 0) {
        std::uint64_t take = n < kChunk ? n : kChunk;
        std::size_t old = s.size();
        s.resize(old + take);
        if (!is.read(s.data() + old, static_cast<std::streamsize>(take)))
            throw SnapshotError("truncated string");
        n -= take;
    }
    return s;
}

inline void put_value(std::ostream& os, const PropertyValue& v) {
    put_u8(os, static_cast<std::uint8_t>(v.kind()));
    switch (v.kind()) {
        case PropertyValue::Kind::Text:
            put_str(os, v.text());
            break;
        case PropertyValue::Kind::Integer:
            put_u64(os, static_cast<std::uint64_t>(v.integer()));
            break;
        case PropertyValue::Kind::Float: {
            std::uint64_t bits;
            double d = v.floating();
            std::memcpy(&bits, &d, sizeof bits);
            put_u64(os, bits);
            break;
        }
        case PropertyValue::Kind::Boolean:
            put_u8(os, v.boolean() ? 1 : 0);
            break;
        case PropertyValue::Kind::Time:
            put_u64(os, static_cast<std::uint64_t>(v.time().millis));
            break;
        case PropertyValue::Kind::List:
            put_u64(os, v.list().size());
            for (const auto& s : v.list()) put_str(os, s);
            break;
    }
}

inline PropertyValue get_value(std::istream& is) {
    auto kind = static_cast<PropertyValue::Kind>(get_u8(is));
    switch (kind) {
        case PropertyValue::Kind::Text:
            return PropertyValue(get_str(is));
        case PropertyValue::Kind::Integer:
            return PropertyValue(static_cast<std::int64_t>(get_u64(is)));
        case PropertyValue::Kind::Float: {
            std::uint64_t bits = get_u64(is);
            double d;
            std::memcpy(&d, &bits, sizeof d);
            return PropertyValue(d);
        }
        case PropertyValue::Kind::Boolean:
            return PropertyValue(get_u8(is) != 0);
        case PropertyValue::Kind::Time:
            return PropertyValue(Timestamp{static_cast<std::int64_t>(get_u64(is))});
        case PropertyValue::Kind::List: {
            std::uint64_t n = get_u64(is);
            TextList l;
            l.reserve(n < 4096 ? n : 4096);
            for (std::uint64_t i = 0; i < n; ++i) l.push_back(get_str(is));
            return PropertyValue(std::move(l));
        }
    }
    throw SnapshotError("unknown value tag");
}

inline void put_props(std::ostream& os, const PropertyMap& props) {
    put_u32(os, static_cast<std::uint32_t>(props.size()));
    for (const auto& [k, v] : props) {
        put_str(os, k);
        put_value(os, v);
    }
}

inline PropertyMap get_props(std::istream& is) {
    std::uint32_t n = get_u32(is);
    PropertyMap props;
    for (std::uint32_t i = 0; i < n; ++i) {
        std::string k = get_str(is);
        props.set(k, get_value(is));
    }
    return props;
}

}  // namespace snapshot_detail

inline void save_snapshot(const LabeledPropertyGraph& g, std::ostream& os) {
    using namespace snapshot_detail;
    os.write(kMagic, sizeof kMagic);
    put_u32(os, kVersion);

    put_u64(os, g.node_count());
    g.for_each_node([&](const Node& n) {
        put_u32(os, static_cast<std::uint32_t>(n.labels.size()));
        for (const auto& l : n.labels) put_str(os, l);
        put_props(os, n.properties);
    });

    put_u64(os, g.relationship_count());
    put_u64(os, g.next_rel_ref());
    g.for_each_relationship([&](const Relationship& r) {
        put_u64(os, r.ref.value);
        put_u64(os, r.source.value);
        put_u64(os, r.target.value);
        put_str(os, r.relType);
        put_props(os, r.properties);
    });

    auto defs = g.index_defs();  // already sorted by (label, key, unique)
    put_u32(os, static_cast<std::uint32_t>(defs.size()));
    for (const auto& d : defs) {
        put_str(os, d.label);
        put_str(os, d.key);
        put_u8(os, d.unique ? 1 : 0);
    }
    if (!os) throw SnapshotError("write failed");
}

inline LabeledPropertyGraph load_snapshot(std::istream& is) {
    using namespace snapshot_detail;
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
        throw SnapshotError("bad magic");
    std::uint32_t version = get_u32(is);
    if (version != kVersion)
        throw SnapshotError("unsupported version " + std::to_string(version));

    try {
        LabeledPropertyGraph g;
        std::uint64_t node_count = get_u64(is);
        for (std::uint64_t i = 0; i < node_count; ++i) {
            std::uint32_t nlabels = get_u32(is);
            std::vector<std::string> labels;
            labels.reserve(nlabels < 4096 ? nlabels : 4096);
            for (std::uint32_t j = 0; j < nlabels; ++j) labels.push_back(get_str(is));
            g.add_node(labels, get_props(is));
        }

        std::uint64_t rel_count = get_u64(is);
        std::uint64_t next_rel = get_u64(is);
        for (std::uint64_t i = 0; i < rel_count; ++i) {
            RelRef ref{get_u64(is)};
            if (ref.value == 0 || ref.value >= next_rel)
                throw SnapshotError("relationship ref out of range");
            NodeRef src{get_u64(is)};
            NodeRef tgt{get_u64(is)};
            std::string type = get_str(is);
            g.restore_relationship(ref, src, tgt, std::move(type), get_props(is));
        }
        g.set_next_rel_ref(next_rel);

        std::uint32_t nindexes = get_u32(is);
        for (std::uint32_t i = 0; i < nindexes; ++i) {
            std::string lbl = get_str(is);
            std::string key = get_str(is);
            bool unique = get_u8(is) != 0;
            g.ensure_index(lbl, key, unique);
        }
        return g;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        // Corrupted counts can surface as allocation failures or graph-level
        // errors; report them all as snapshot corruption.
        throw SnapshotError(std::string("corrupted input: ") + e.what());
    }
}

inline void save_snapshot_file(const LabeledPropertyGraph& g, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    save_snapshot(g, os);
}

inline LabeledPropertyGraph load_snapshot_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "'");
    return load_snapshot(is);
}

inline std::string snapshot_to_string(const LabeledPropertyGraph& g) {
    std::ostringstream os(std::ios::binary);
    save_snapshot(g, os);
    return os.str();
}

}  // namespace ekg
