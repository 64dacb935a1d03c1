#pragma once

#include "glod/bench.hpp"
#include "glod/diagnostics.hpp"
#include "glod/fgsd.hpp"
#include "glod/generators.hpp"
#include "glod/graph.hpp"
#include "glod/io.hpp"
#include "glod/isolation_forest.hpp"
#include "glod/kernels.hpp"
#include "glod/lof.hpp"
#include "glod/ocsvm.hpp"
#include "glod/parallel.hpp"
#include "glod/scores.hpp"
#include "glod/sim.hpp"
#include "glod/tu_format.hpp"

namespace glod {
inline constexpr const char* kVersion = "glod 0.1.0";
}
