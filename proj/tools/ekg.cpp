// ekg: command-line driver for the event knowledge graph engine.
//
// Verbs: import, validate, query, qf, aggregate, export, stats. One graph
// snapshot per working file; verbs compose across invocations. Progress goes
// to stderr, results to stdout.
//
// Exit codes: 0 ok, 1 usage, 2 input/parse error, 3 validation violations
// present (validate verb), 4 internal error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ekg/ekg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitViolations = 3;
constexpr int kExitInternal = 4;

std::vector<std::string> split_csv_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

ekg::LabeledPropertyGraph load_graph(const std::string& path) {
    std::cerr << "loading snapshot " << path << "\n";
    return ekg::load_snapshot_file(path);
}

int cmd_import(const std::string& configPath, const std::string& csvPath,
               const std::string& outPath, bool keepPartial) {
    ekg::LabeledPropertyGraph g;
    try {
        ekg::PipelineSummary summary = ekg::run_pipeline_files(configPath, csvPath, g);
        ekg::save_snapshot_file(g, outPath);
        std::cerr << "snapshot written to " << outPath << "\n";
        std::cout << summary.to_text();
        if (!summary.report.empty()) std::cout << summary.report.to_text();
        return kExitOk;
    } catch (const ekg::StageError& e) {
        std::cerr << "pipeline aborted at stage " << e.stage << ": " << e.what() << "\n";
        if (keepPartial) {
            ekg::save_snapshot_file(g, outPath);
            std::cerr << "partial graph written to " << outPath << "\n";
        }
        return kExitInput;
    }
}

int cmd_validate(const std::string& snapPath, const std::string& familiesArg, bool asJson) {
    auto g = load_graph(snapPath);
    std::set<ekg::Family> families = ekg::kAllFamilies;
    if (!familiesArg.empty()) {
        families.clear();
        for (const auto& name : split_csv_list(familiesArg)) {
            auto f = ekg::family_from_string(name);
            if (!f) {
                std::cerr << "unknown family '" << name << "' (expected V1..V6)\n";
                return kExitUsage;
            }
            families.insert(*f);
        }
    }
    ekg::ViolationReport report = ekg::validate(g, families);
    std::cout << (asJson ? report.to_json_lines() : report.to_text());
    std::cerr << report.violations.size() << " violation(s), " << report.warnings.size()
              << " warning(s)\n";
    return report.empty() ? kExitOk : kExitViolations;
}

int cmd_query(const std::string& snapPath, std::string queryText, const std::string& queryFile,
              const std::string& format, bool showPlan) {
    if (!queryFile.empty()) {
        std::ifstream is(queryFile);
        if (!is) throw ekg::IoError("cannot open '" + queryFile + "'");
        std::ostringstream buf;
        buf << is.rdbuf();
        queryText = buf.str();
    }
    if (queryText.empty()) {
        std::cerr << "no query given (use --query or --file)\n";
        return kExitUsage;
    }
    auto g = load_graph(snapPath);
    ekg::pattern::PatternAST ast = ekg::pattern::parse(queryText);
    if (showPlan) std::cerr << ekg::pattern::explain(ast, g.index_defs());
    ekg::pattern::ResultTable table = ekg::pattern::evaluate(g, ast);
    std::cout << (format == "csv" ? table.to_csv() : table.to_text());
    std::cerr << table.rows.size() << " row(s)\n";
    return kExitOk;
}

void print_paths(const std::vector<ekg::EventPath>& paths, const ekg::LabeledPropertyGraph& g,
                 const std::string& format) {
    if (format == "csv") std::cout << "entity,path\n";
    for (const auto& p : paths) {
        std::string acts;
        for (std::size_t i = 0; i < p.events.size(); ++i)
            acts += (i ? (format == "csv" ? ";" : " -> ") : "") +
                    g.node(p.events[i]).text_prop(ekg::prop::Activity);
        if (format == "csv")
            std::cout << ekg::csv_row({p.entityUid, acts});
        else
            std::cout << p.entityUid << ": " << acts << "\n";
    }
}

int cmd_qf(const std::string& snapPath, const std::string& op, const std::string& uid,
           const std::string& entityType, const std::string& from, const std::string& to,
           const std::string& mode, std::size_t minCount, const std::string& parentType,
           const std::string& parentFrom, const std::string& format) {
    auto g = load_graph(snapPath);
    if (op == "events_of") {
        auto events = ekg::events_of_entity(g, uid);
        if (format == "csv") std::cout << "event,activity,timestamp\n";
        for (auto ev : events) {
            const ekg::Node& n = g.node(ev);
            const ekg::PropertyValue* ts = n.prop(ekg::prop::Timestamp);
            std::vector<std::string> cells = {"#" + std::to_string(ev.value),
                                              n.text_prop(ekg::prop::Activity),
                                              ts ? ts->to_string() : ""};
            if (format == "csv")
                std::cout << ekg::csv_row(cells);
            else
                std::cout << cells[0] << "  " << cells[1] << "  " << cells[2] << "\n";
        }
    } else if (op == "df_pairs") {
        auto pairs = ekg::directly_follows_pairs(
            g, entityType, from.empty() ? std::nullopt : std::optional<std::string>(from),
            to.empty() ? std::nullopt : std::optional<std::string>(to));
        if (format == "csv") std::cout << "from,to,fromActivity,toActivity\n";
        for (auto& [a, b] : pairs) {
            std::vector<std::string> cells = {"#" + std::to_string(a.value),
                                              "#" + std::to_string(b.value),
                                              g.node(a).text_prop(ekg::prop::Activity),
                                              g.node(b).text_prop(ekg::prop::Activity)};
            if (format == "csv")
                std::cout << ekg::csv_row(cells);
            else
                std::cout << cells[0] << " -> " << cells[1] << "  (" << cells[2] << " -> "
                          << cells[3] << ")\n";
        }
    } else if (op == "eventually_follows") {
        print_paths(ekg::eventually_follows(g, entityType, from, to), g, format);
    } else if (op == "variant_of") {
        auto variant = ekg::variant_of(g, uid, entityType);
        std::string acts;
        for (std::size_t i = 0; i < variant.size(); ++i)
            acts += (i ? (format == "csv" ? ";" : " -> ") : "") + variant[i];
        if (format == "csv")
            std::cout << "entity,variant\n" << ekg::csv_row({uid, acts});
        else
            std::cout << acts << "\n";
    } else if (op == "duration_between") {
        ekg::DurationMode m = mode == "max"   ? ekg::DurationMode::Max
                              : mode == "min" ? ekg::DurationMode::Min
                                              : ekg::DurationMode::All;
        auto results = ekg::duration_between(g, entityType, from, to, m);
        if (format == "csv") std::cout << "entity,start,end,duration\n";
        for (const auto& r : results) {
            std::string dur = ekg::format_duration_iso8601(r.elapsedMillis);
            if (format == "csv")
                std::cout << ekg::csv_row({r.entityUid, "#" + std::to_string(r.startEvent.value),
                                           "#" + std::to_string(r.endEvent.value), dur});
            else
                std::cout << r.entityUid << ": " << dur << "\n";
        }
    } else if (op == "df_pattern") {
        auto parents = ekg::entities_with_df_pattern(g, entityType, from, to, parentType, minCount);
        if (format == "csv") std::cout << "entity\n";
        for (const auto& p : parents) std::cout << (format == "csv" ? p + "\n" : p + "\n");
    } else if (op == "paths_in_parent") {
        // targets: the to-events of qualifying child DF edges
        std::set<ekg::NodeRef> targets;
        for (auto& [a, b] : ekg::directly_follows_pairs(g, entityType, from, to))
            targets.insert(b);
        auto paths = ekg::paths_in_parent(g, uid, parentFrom, targets);
        print_paths(paths, g, format);
    } else {
        std::cerr << "unknown op '" << op << "'\n";
        return kExitUsage;
    }
    return kExitOk;
}

int cmd_aggregate(const std::string& snapPath, const std::string& classType,
                  const std::string& entitiesArg, std::int64_t minCount,
                  const std::string& outSnap, const std::string& csvPath) {
    auto g = load_graph(snapPath);
    std::vector<std::string> types = split_csv_list(entitiesArg);
    if (types.empty()) {
        std::cerr << "--entities requires at least one entity type\n";
        return kExitUsage;
    }
    ekg::AggregatedGraph agg = ekg::entity_centric_dfg(g, classType, types);
    agg = ekg::filter_by_count(agg, minCount);
    std::string csv = ekg::aggregated_to_csv(agg);
    if (!csvPath.empty()) {
        std::ofstream os(csvPath, std::ios::binary | std::ios::trunc);
        os << csv;
        std::cerr << "aggregated CSV written to " << csvPath << "\n";
    } else {
        std::cout << csv;
    }
    std::string target = outSnap.empty() ? snapPath : outSnap;
    ekg::save_snapshot_file(g, target);
    std::cerr << "snapshot with DF_C written to " << target << "\n";
    return kExitOk;
}

int cmd_export(const std::string& snapPath, const std::string& scopeArg,
               const std::string& dotPath, const std::string& graphmlPath,
               const std::string& nodeKinds, const std::string& relTypes) {
    auto g = load_graph(snapPath);
    ekg::ExportSelection sel;
    if (scopeArg.empty() || scopeArg == "full") {
        sel = ekg::ExportSelection::full();
    } else if (scopeArg.rfind("entity=", 0) == 0) {
        sel = ekg::ExportSelection::entity(scopeArg.substr(7));
    } else if (scopeArg.rfind("entityType=", 0) == 0) {
        sel = ekg::ExportSelection::entity_types(split_csv_list(scopeArg.substr(11)));
    } else if (scopeArg.rfind("aggregated=", 0) == 0) {
        // aggregated=<classType>:<type1,type2>[:<minCount>]
        std::string rest = scopeArg.substr(11);
        auto c1 = rest.find(':');
        if (c1 == std::string::npos) {
            std::cerr << "aggregated scope needs classType:entityTypes[:minCount]\n";
            return kExitUsage;
        }
        std::string classType = rest.substr(0, c1);
        std::string tail = rest.substr(c1 + 1);
        std::int64_t minCount = 1;
        auto c2 = tail.find(':');
        if (c2 != std::string::npos) {
            minCount = std::stoll(tail.substr(c2 + 1));
            tail = tail.substr(0, c2);
        }
        sel = ekg::ExportSelection::aggregated(classType, split_csv_list(tail), minCount);
    } else {
        std::cerr << "unknown scope '" << scopeArg << "'\n";
        return kExitUsage;
    }
    if (!nodeKinds.empty()) {
        auto kinds = split_csv_list(nodeKinds);
        sel.includeNodeKinds = std::set<std::string>(kinds.begin(), kinds.end());
    }
    if (!relTypes.empty()) {
        auto types = split_csv_list(relTypes);
        sel.includeRelTypes = std::set<std::string>(types.begin(), types.end());
    }
    if (dotPath.empty() && graphmlPath.empty()) {
        std::cerr << "nothing to do: pass --dot and/or --graphml\n";
        return kExitUsage;
    }
    if (!dotPath.empty()) {
        ekg::export_dot(g, sel, dotPath);
        std::cerr << "DOT written to " << dotPath << "\n";
    }
    if (!graphmlPath.empty()) {
        ekg::export_graphml(g, sel, graphmlPath);
        std::cerr << "GraphML written to " << graphmlPath << "\n";
    }
    return kExitOk;
}

int cmd_stats(const std::string& snapPath) {
    auto g = load_graph(snapPath);
    ekg::PipelineSummary summary;
    ekg::census(g, summary);
    std::cout << summary.to_text();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"event knowledge graph engine"};
    app.require_subcommand(1);

    // import
    auto* import = app.add_subcommand("import", "run the pipeline on a CSV event table");
    std::string configPath, csvPath, outPath = "graph.snap";
    bool keepPartial = false;
    import->add_option("--config", configPath, "derivation config JSON")->required();
    import->add_option("--csv", csvPath, "event table CSV")->required();
    import->add_option("--out", outPath, "snapshot output path");
    import->add_flag("--keep-partial", keepPartial, "write the partial graph on stage failure");

    // validate
    auto* validate = app.add_subcommand("validate", "check semantic constraints");
    std::string snapPath, familiesArg;
    bool asJson = false;
    validate->add_option("snapshot", snapPath, "graph snapshot")->required();
    validate->add_option("--families", familiesArg, "comma list, e.g. V1,V3");
    validate->add_flag("--json", asJson, "line-JSON output");

    // query
    auto* query = app.add_subcommand("query", "evaluate a pattern query");
    std::string querySnap, queryText, queryFile, queryFormat = "text";
    bool showPlan = false;
    query->add_option("snapshot", querySnap)->required();
    query->add_option("--query", queryText, "query text");
    query->add_option("--file", queryFile, "file containing the query");
    query->add_option("--format", queryFormat, "text|csv");
    query->add_flag("--explain", showPlan, "print the plan to stderr");

    // qf: named query primitives
    auto* qf = app.add_subcommand("qf", "run a named query primitive");
    std::string qfSnap, qfOp, qfUid, qfType, qfFrom, qfTo, qfMode = "all", qfParent,
                             qfParentFrom, qfFormat = "text";
    std::size_t qfMin = 1;
    qf->add_option("snapshot", qfSnap)->required();
    qf->add_option("--op", qfOp,
                   "events_of|df_pairs|eventually_follows|variant_of|duration_between|"
                   "df_pattern|paths_in_parent")
        ->required();
    qf->add_option("--uid", qfUid, "entity uID");
    qf->add_option("--entity-type", qfType, "entity type");
    qf->add_option("--from", qfFrom, "from activity");
    qf->add_option("--to", qfTo, "to activity");
    qf->add_option("--mode", qfMode, "max|min|all (duration_between)");
    qf->add_option("--min-count", qfMin, "minimum distinct children (df_pattern)");
    qf->add_option("--parent-type", qfParent, "parent entity type (df_pattern)");
    qf->add_option("--parent-from", qfParentFrom, "parent start activity (paths_in_parent)");
    qf->add_option("--format", qfFormat, "text|csv");

    // aggregate
    auto* aggregate = app.add_subcommand("aggregate", "build class-level DF_C edges");
    std::string aggSnap, aggClass = "Activity", aggEntities, aggOut, aggCsv;
    std::int64_t aggMin = 1;
    aggregate->add_option("snapshot", aggSnap)->required();
    aggregate->add_option("--class", aggClass, "class type to aggregate on");
    aggregate->add_option("--entities", aggEntities, "comma list of entity types")->required();
    aggregate->add_option("--min-count", aggMin, "keep edges with count >= this");
    aggregate->add_option("--out", aggOut, "write updated snapshot here (default: in place)");
    aggregate->add_option("--csv", aggCsv, "write the edge list CSV here instead of stdout");

    // export
    auto* exp = app.add_subcommand("export", "export a subgraph to DOT/GraphML");
    std::string expSnap, expScope = "full", expDot, expGraphml, expNodeKinds, expRelTypes;
    exp->add_option("snapshot", expSnap)->required();
    exp->add_option("--scope", expScope,
                    "full | entity=<uID> | entityType=<a,b> | aggregated=<class>:<types>[:min]");
    exp->add_option("--dot", expDot, "DOT output path");
    exp->add_option("--graphml", expGraphml, "GraphML output path");
    exp->add_option("--node-kinds", expNodeKinds, "comma list of node labels to keep");
    exp->add_option("--rel-types", expRelTypes, "comma list of relationship types to keep");

    // stats
    auto* stats = app.add_subcommand("stats", "print a census of the graph");
    std::string statsSnap;
    stats->add_option("snapshot", statsSnap)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*import) return cmd_import(configPath, csvPath, outPath, keepPartial);
        if (*validate) return cmd_validate(snapPath, familiesArg, asJson);
        if (*query) return cmd_query(querySnap, queryText, queryFile, queryFormat, showPlan);
        if (*qf)
            return cmd_qf(qfSnap, qfOp, qfUid, qfType, qfFrom, qfTo, qfMode, qfMin, qfParent,
                          qfParentFrom, qfFormat);
        if (*aggregate)
            return cmd_aggregate(aggSnap, aggClass, aggEntities, aggMin, aggOut, aggCsv);
        if (*exp) return cmd_export(expSnap, expScope, expDot, expGraphml, expNodeKinds,
                                    expRelTypes);
        if (*stats) return cmd_stats(statsSnap);
        return kExitUsage;
    } catch (const ekg::pattern::SyntaxError& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    } catch (const ekg::StageError& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    } catch (const ekg::IoError& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    } catch (const ekg::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    } catch (const ekg::SnapshotError& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    } catch (const ekg::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
