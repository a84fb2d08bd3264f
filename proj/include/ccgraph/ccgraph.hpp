#pragma once

#include "ccgraph/error.hpp"
#include "ccgraph/random.hpp"
#include "ccgraph/stats.hpp"
#include "ccgraph/manifold.hpp"
#include "ccgraph/embedding.hpp"
#include "ccgraph/oos.hpp"
#include "ccgraph/lsap.hpp"
#include "ccgraph/graph.hpp"
#include "ccgraph/delaunay.hpp"
#include "ccgraph/dataset.hpp"
#include "ccgraph/detection.hpp"
#include "ccgraph/pipeline.hpp"
#include "ccgraph/report.hpp"
