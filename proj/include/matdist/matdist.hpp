#pragma once

#include "matdist/analysis.hpp"
#include "matdist/distribution.hpp"
#include "matdist/grids.hpp"
#include "matdist/io.hpp"
#include "matdist/kernels.hpp"
#include "matdist/parallel.hpp"
#include "matdist/recovery.hpp"
#include "matdist/rng.hpp"
#include "matdist/sample_matrix.hpp"
#include "matdist/spaces.hpp"
#include "matdist/stats.hpp"
#include "matdist/version.hpp"
