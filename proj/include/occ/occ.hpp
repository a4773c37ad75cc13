#pragma once

#include "occ/behavior_graph.hpp"
#include "occ/catalog.hpp"
#include "occ/diagnostics.hpp"
#include "occ/dsl/compile.hpp"
#include "occ/dsl/document.hpp"
#include "occ/dsl/export.hpp"
#include "occ/dsl/lexer.hpp"
#include "occ/dsl/parser.hpp"
#include "occ/dsl/serializer.hpp"
#include "occ/event_model.hpp"
#include "occ/expr.hpp"
#include "occ/sim_engine.hpp"
#include "occ/static_model.hpp"
#include "occ/timeline.hpp"
