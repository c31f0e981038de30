#pragma once

#include "ceopt/benchmarks.hpp"
#include "ceopt/constrained.hpp"
#include "ceopt/core.hpp"
#include "ceopt/examples.hpp"
#include "ceopt/solver.hpp"
#include "ceopt/stats.hpp"
#include "ceopt/trace.hpp"
