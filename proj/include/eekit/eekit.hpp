#pragma once

#include "eekit/allocator.hpp"
#include "eekit/approx.hpp"
#include "eekit/channel.hpp"
#include "eekit/config.hpp"
#include "eekit/csv.hpp"
#include "eekit/effcap.hpp"
#include "eekit/experiments.hpp"
#include "eekit/linkmodel.hpp"
#include "eekit/parallel.hpp"
#include "eekit/rng.hpp"
#include "eekit/units.hpp"
