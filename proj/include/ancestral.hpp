#pragma once

#include "ancestral/benchmark.hpp"
#include "ancestral/complexity.hpp"
#include "ancestral/errors.hpp"
#include "ancestral/graph.hpp"
#include "ancestral/graph_io.hpp"
#include "ancestral/info.hpp"
#include "ancestral/network.hpp"
#include "ancestral/projection.hpp"
#include "ancestral/rng.hpp"
#include "ancestral/score.hpp"
#include "ancestral/search.hpp"
#include "ancestral/separation.hpp"
#include "ancestral/table.hpp"
#include "ancestral/vertex_set.hpp"
