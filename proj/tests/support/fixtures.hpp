#pragma once

// Shared test fixtures: the bundled sample event table (the running example
// throughout the suites), hand-built counter-example graphs, and a seeded
// random event-table generator with an independent brute-force
// directly-follows oracle. The oracle works on raw rows and never touches the
// engine's derivation code.

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ekg/ekg.hpp"

namespace ekgtest {

inline std::string fixture_dir() { return EKG_FIXTURE_DIR; }
inline std::string fixture_csv() { return fixture_dir() + "/bpic17_sample.csv"; }
inline std::string fixture_config_path() { return fixture_dir() + "/bpic17_sample.config.json"; }

inline ekg::DerivationConfig fixture_config() { return ekg::load_config(fixture_config_path()); }

inline ekg::EventTable fixture_table() {
    auto cfg = fixture_config();
    return ekg::load_event_table(fixture_csv(), cfg.import);
}

// Full pipeline over the sample: rules Application, Workflow, Offer,
// Resource, Case plus the reified Case_AO, classifiers Activity and Resource.
inline ekg::LabeledPropertyGraph build_fixture_graph(ekg::PipelineSummary* summary = nullptr) {
    ekg::LabeledPropertyGraph g;
    auto cfg = fixture_config();
    auto table = ekg::load_event_table(fixture_csv(), cfg.import);
    auto s = ekg::run_pipeline(cfg, table, g);
    if (summary) *summary = s;
    return g;
}

// The walkthrough subset: Application, Workflow, Offer entities and the
// reified Case_AO only (no Resource, no global Case).
inline ekg::LabeledPropertyGraph build_walkthrough_graph() {
    ekg::LabeledPropertyGraph g;
    auto cfg = fixture_config();
    auto table = ekg::load_event_table(fixture_csv(), cfg.import);

    ekg::import_events(g, table);
    ekg::create_logs(g, cfg.import.defaultLogId);
    std::vector<ekg::EntityRule> rules;
    for (const auto& rule : cfg.entities)
        if (rule.entityType == "Application" || rule.entityType == "Workflow" ||
            rule.entityType == "Offer")
            rules.push_back(rule);
    for (const auto& rule : rules) {
        ekg::derive_entities(g, rule);
        ekg::correlate_events(g, rule);
        ekg::derive_df(g, rule.entityType);
    }
    ekg::ReificationRule reify{"Application", "Offer", "Appl", "Case_AO", {"Unknown", ""}};
    ekg::reify_relation(g, reify);
    ekg::correlate_composite(g, "Case_AO", "Application");
    ekg::correlate_composite(g, "Case_AO", "Offer");
    ekg::derive_df(g, "Case_AO");
    return g;
}

// The incorrect-pattern counter-example: three DF defects (time order,
// missing shared-entity witness, self-loop) in an otherwise well-formed
// graph.
struct Fig7Graph {
    ekg::LabeledPropertyGraph g;
    ekg::NodeRef e1, e2, e3, n1, n2, log;
};

inline Fig7Graph build_fig7_graph() {
    using ekg::PropertyValue;
    Fig7Graph f;
    auto& g = f.g;
    auto event = [&](const std::string& activity, std::int64_t ms) {
        return g.add_node({ekg::label::Event},
                          {{ekg::prop::Activity, PropertyValue(activity)},
                           {ekg::prop::Timestamp, PropertyValue(ekg::Timestamp{ms})}});
    };
    f.e1 = event("A", 1000);
    f.e2 = event("B", 3000);
    f.e3 = event("C", 2000);  // earlier than e2 on purpose
    f.n1 = g.add_node({ekg::label::Entity},
                      {{ekg::prop::EntityType, PropertyValue("T1")},
                       {ekg::prop::ID, PropertyValue("1")},
                       {ekg::prop::UID, PropertyValue("T11")}});
    f.n2 = g.add_node({ekg::label::Entity},
                      {{ekg::prop::EntityType, PropertyValue("T2")},
                       {ekg::prop::ID, PropertyValue("1")},
                       {ekg::prop::UID, PropertyValue("T21")}});
    f.log = g.add_node({ekg::label::Log}, {{ekg::prop::ID, PropertyValue("L")}});
    for (auto ev : {f.e1, f.e2, f.e3}) g.add_relationship(f.log, ev, ekg::rel::L_E, {});
    g.add_relationship(f.e1, f.n1, ekg::rel::E_EN, {});
    g.add_relationship(f.e2, f.n2, ekg::rel::E_EN, {});
    g.add_relationship(f.e3, f.n2, ekg::rel::E_EN, {});
    // e1 -> e2 across entities without a shared correlation
    g.add_relationship(f.e1, f.e2, ekg::rel::DF,
                       {{ekg::prop::EntityType, PropertyValue("T1")}});
    // e2 -> e3 against the timestamps
    g.add_relationship(f.e2, f.e3, ekg::rel::DF,
                       {{ekg::prop::EntityType, PropertyValue("T2")}});
    // e3 -> e3 self-loop
    g.add_relationship(f.e3, f.e3, ekg::rel::DF,
                       {{ekg::prop::EntityType, PropertyValue("T2")}});
    return f;
}

// ---- random tables + brute-force oracle ----

struct OracleRow {
    std::size_t index = 0;  // 1-based, equals the Event node ref after import
    std::int64_t ts = 0;
    std::map<std::string, std::string> cells;  // absent key = absent value
};

struct RandomTable {
    ekg::EventTable table;
    std::vector<OracleRow> rows;
    std::vector<ekg::EntityRule> rules;
};

inline RandomTable make_random_table(std::mt19937& rng, std::size_t max_events = 50) {
    RandomTable out;
    std::uniform_int_distribution<std::size_t> n_events(2, max_events);
    const std::size_t n = n_events(rng);

    const std::vector<std::string> activities = {"A", "B", "C", "D", "E", "F", "G", "H"};
    // A small timestamp pool forces identical-timestamp ties.
    const std::size_t pool = std::max<std::size_t>(1, n / 4);
    std::uniform_int_distribution<std::size_t> pick_ts(0, pool - 1);
    std::uniform_int_distribution<std::size_t> pick_act(0, activities.size() - 1);
    std::uniform_int_distribution<int> cid(1, 4), oid(1, 3), rid(1, 5);
    std::uniform_int_distribution<int> pct(1, 100);

    out.table.header = {"Activity", "Timestamp", "cid", "oid", "rid"};
    for (std::size_t i = 1; i <= n; ++i) {
        OracleRow row;
        row.index = i;
        row.ts = 1'500'000'000'000LL + static_cast<std::int64_t>(pick_ts(rng)) * 60'000;
        row.cells["Activity"] = activities[pick_act(rng)];
        row.cells["cid"] = std::to_string(cid(rng));  // every event has a case
        // First row always carries all ids so every type has an entity.
        if (i == 1 || pct(rng) <= 60) row.cells["oid"] = std::to_string(oid(rng));
        if (i == 1 || pct(rng) <= 75) row.cells["rid"] = std::to_string(rid(rng));
        out.rows.push_back(row);
    }

    // Guarantee the tie rate: at least a fifth of rows must share their
    // timestamp with some other row.
    auto tie_rate = [&] {
        std::map<std::int64_t, std::size_t> freq;
        for (const auto& r : out.rows) ++freq[r.ts];
        std::size_t tied = 0;
        for (const auto& r : out.rows)
            if (freq[r.ts] > 1) ++tied;
        return static_cast<double>(tied) / static_cast<double>(out.rows.size());
    };
    std::uniform_int_distribution<std::size_t> pick_row(0, n - 1);
    while (n > 1 && tie_rate() < 0.2) {
        std::size_t a = pick_row(rng), b = pick_row(rng);
        if (a != b) out.rows[a].ts = out.rows[b].ts;
    }

    for (const auto& row : out.rows) {
        ekg::EventRecord rec;
        rec.rowIndex = row.index;
        for (const auto& [k, v] : row.cells) rec.values.set(k, ekg::PropertyValue(v));
        rec.values.set("Timestamp", ekg::PropertyValue(ekg::Timestamp{row.ts}));
        out.table.rows.push_back(std::move(rec));
    }

    out.rules = {{"Case", "cid", {}}, {"Order", "oid", {}}, {"Res", "rid", {}}};
    return out;
}

// Brute force: per entity id, sort that entity's rows by (timestamp, row) and
// take adjacent pairs. Returns row-index pairs per entity type.
inline std::map<std::string, std::set<std::pair<std::size_t, std::size_t>>> oracle_df_pairs(
    const std::vector<OracleRow>& rows, const std::vector<ekg::EntityRule>& rules) {
    std::map<std::string, std::set<std::pair<std::size_t, std::size_t>>> out;
    for (const auto& rule : rules) {
        std::map<std::string, std::vector<const OracleRow*>> groups;
        for (const auto& row : rows) {
            auto it = row.cells.find(rule.idColumn);
            if (it == row.cells.end() || it->second.empty()) continue;
            if (rule.filter) {
                auto fit = row.cells.find(rule.filter->column);
                if (fit == row.cells.end() || ekg::PropertyValue(fit->second) != rule.filter->equals)
                    continue;
            }
            groups[it->second].push_back(&row);
        }
        auto& pairs = out[rule.entityType];
        for (auto& [id, members] : groups) {
            std::sort(members.begin(), members.end(), [](const OracleRow* a, const OracleRow* b) {
                if (a->ts != b->ts) return a->ts < b->ts;
                return a->index < b->index;
            });
            for (std::size_t i = 0; i + 1 < members.size(); ++i)
                pairs.emplace(members[i]->index, members[i + 1]->index);
        }
    }
    return out;
}

// Ingests a random table: events, single log, entities, correlation, DF.
inline ekg::LabeledPropertyGraph ingest_random_table(const RandomTable& rt) {
    ekg::LabeledPropertyGraph g;
    ekg::import_events(g, rt.table);
    ekg::create_logs(g, "L");
    for (const auto& rule : rt.rules) {
        ekg::derive_entities(g, rule);
        ekg::correlate_events(g, rule);
    }
    for (const auto& rule : rt.rules) ekg::derive_df(g, rule.entityType);
    return g;
}

// Engine-side DF pairs mapped back to row indices (event refs equal rows).
inline std::set<std::pair<std::size_t, std::size_t>> engine_df_pairs(
    const ekg::LabeledPropertyGraph& g, const std::string& entityType) {
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (auto& [a, b] : ekg::directly_follows_pairs(g, entityType))
        out.emplace(a.value, b.value);
    return out;
}

}  // namespace ekgtest
