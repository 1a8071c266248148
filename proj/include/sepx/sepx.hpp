#pragma once

#include "sepx/batch.hpp"
#include "sepx/edit.hpp"
#include "sepx/error.hpp"
#include "sepx/evolve.hpp"
#include "sepx/ged.hpp"
#include "sepx/graph.hpp"
#include "sepx/graph_io.hpp"
#include "sepx/lbei.hpp"
#include "sepx/operators.hpp"
#include "sepx/random.hpp"
#include "sepx/validity.hpp"
