#pragma once

#include "mxsefl/bundle.hpp"
#include "mxsefl/codec.hpp"
#include "mxsefl/enumerate.hpp"
#include "mxsefl/envy_graph.hpp"
#include "mxsefl/error.hpp"
#include "mxsefl/fairness.hpp"
#include "mxsefl/instances.hpp"
#include "mxsefl/io.hpp"
#include "mxsefl/matching.hpp"
#include "mxsefl/oracle.hpp"
#include "mxsefl/partition.hpp"
#include "mxsefl/preference.hpp"
#include "mxsefl/rational.hpp"
#include "mxsefl/solver.hpp"
#include "mxsefl/valuation.hpp"
