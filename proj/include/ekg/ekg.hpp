#pragma once

// Umbrella header for the event knowledge graph engine.

#include "ekg/aggregate.hpp"
#include "ekg/config.hpp"
#include "ekg/csv.hpp"
#include "ekg/errors.hpp"
#include "ekg/event_model.hpp"
#include "ekg/exporters.hpp"
#include "ekg/graph_store.hpp"
#include "ekg/ingest.hpp"
#include "ekg/pattern/ast.hpp"
#include "ekg/pattern/evaluator.hpp"
#include "ekg/pattern/explain.hpp"
#include "ekg/pattern/parser.hpp"
#include "ekg/pattern/printer.hpp"
#include "ekg/pipeline.hpp"
#include "ekg/property_value.hpp"
#include "ekg/query.hpp"
#include "ekg/snapshot.hpp"
#include "ekg/time.hpp"
#include "ekg/validator.hpp"
