#pragma once

// End-to-end pipeline: load the table, import events, create logs, derive
// and correlate entities, derive per-entity DF chains, reify relations into
// composites, classify, and validate. Any stage failure surfaces as a
// StageError naming the stage; the partially built graph stays usable for
// inspection.

#include <chrono>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "ekg/aggregate.hpp"
#include "ekg/config.hpp"
#include "ekg/event_model.hpp"
#include "ekg/ingest.hpp"
#include "ekg/validator.hpp"

namespace ekg {

struct PipelineSummary {
    std::map<std::string, std::size_t> nodesByLabel;
    std::map<std::string, std::size_t> relsByType;
    std::map<std::string, std::size_t> dfByEntityType;
    std::size_t totalNodes = 0;
    std::size_t totalRelationships = 0;
    std::map<std::string, std::size_t> classifierSkips;  // classType -> skipped events
    ViolationReport report;
    double wallSeconds = 0;

    std::string to_text() const {
        std::ostringstream os;
        os << "nodes                " << totalNodes << "\n";
        for (const auto& [l, n] : nodesByLabel) os << "  " << pad(l) << n << "\n";
        os << "relationships        " << totalRelationships << "\n";
        for (const auto& [t, n] : relsByType) os << "  " << pad(t) << n << "\n";
        if (!dfByEntityType.empty()) {
            os << "DF per entity type\n";
            for (const auto& [t, n] : dfByEntityType) os << "  " << pad(t) << n << "\n";
        }
        for (const auto& [c, n] : classifierSkips)
            os << "classifier '" << c << "' skipped " << n << " events without keys\n";
        os << "violations           " << report.violations.size() << "\n";
        if (!report.warnings.empty())
            os << "warnings             " << report.warnings.size() << "\n";
        std::ostringstream secs;
        secs.setf(std::ios::fixed);
        secs.precision(3);
        secs << wallSeconds;
        os << "wall time            " << secs.str() << " s\n";
        return os.str();
    }

private:
    static std::string pad(const std::string& s) {
        std::string out = s;
        while (out.size() < 19) out += ' ';
        return out;
    }
};

inline void census(const LabeledPropertyGraph& g, PipelineSummary& summary) {
    summary.nodesByLabel = g.nodes_by_label();
    summary.relsByType = g.relationships_by_type();
    summary.totalNodes = g.node_count();
    summary.totalRelationships = g.relationship_count();
    summary.dfByEntityType.clear();
    g.for_each_relationship([&](const Relationship& r) {
        if (r.relType == rel::DF) ++summary.dfByEntityType[r.text_prop(prop::EntityType)];
    });
}

// Runs every stage after table loading on the provided graph. The graph is
// passed in so a caller can keep the partial state when a stage throws.
inline PipelineSummary run_pipeline(const DerivationConfig& config, const EventTable& table,
                                    LabeledPropertyGraph& g) {
    auto started = std::chrono::steady_clock::now();
    PipelineSummary summary;

    auto stage = [&](const char* name, auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            throw StageError(name, e.what());
        }
    };

    stage("import_events", [&] {
        g.ensure_index(label::Entity, prop::UID, true);
        g.ensure_index(label::Entity, prop::EntityType, false);
        g.ensure_index(label::Event, prop::Activity, false);
        g.ensure_index(label::Class, prop::Type, false);
        g.ensure_index(label::Log, prop::ID, false);
        import_events(g, table);
    });
    stage("create_logs", [&] { create_logs(g, config.import.defaultLogId); });

    for (const auto& rule : config.entities) {
        stage("derive_entities", [&] { derive_entities(g, rule); });
        stage("correlate_events", [&] { correlate_events(g, rule); });
    }

    DfOptions df_options{config.allowCrossLogDf};
    std::set<std::string> df_done;
    for (const auto& rule : config.entities) {
        if (!df_done.insert(rule.entityType).second) continue;
        stage("derive_df", [&] { derive_df(g, rule.entityType, df_options); });
    }

    for (const auto& rule : config.reifications) {
        stage("reify_relation", [&] { reify_relation(g, rule); });
        stage("correlate_composite", [&] {
            correlate_composite(g, rule.compositeType, rule.type1);
            correlate_composite(g, rule.compositeType, rule.type2);
        });
        if (df_done.insert(rule.compositeType).second)
            stage("derive_df", [&] { derive_df(g, rule.compositeType, df_options); });
    }

    for (const auto& rule : config.classifiers) {
        stage("derive_classes", [&] { derive_classes(g, rule); });
        stage("link_event_classes", [&] {
            LinkStats stats = link_event_classes(g, rule);
            if (stats.skippedMissingKey) summary.classifierSkips[rule.classType] = stats.skippedMissingKey;
        });
    }

    stage("validate", [&] {
        ValidationOptions opts;
        opts.crossLogDfAsWarning = config.allowCrossLogDf;
        summary.report = validate(g, kAllFamilies, opts);
    });

    census(g, summary);
    summary.wallSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return summary;
}

inline PipelineSummary run_pipeline_files(const std::string& configPath,
                                          const std::string& csvPath, LabeledPropertyGraph& g) {
    DerivationConfig config;
    EventTable table;
    try {
        config = load_config(configPath);
    } catch (const Error& e) {
        throw StageError("load_config", e.what());
    }
    try {
        table = load_event_table(csvPath, config.import);
    } catch (const Error& e) {
        throw StageError("load_event_table", e.what());
    }
    return run_pipeline(config, table, g);
}

}  // namespace ekg
