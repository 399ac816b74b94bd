#pragma once

#include "devo/biorobots/params.hpp"
#include "devo/biorobots/simulate.hpp"
#include "devo/biorobots/world.hpp"
#include "devo/diversity.hpp"
#include "devo/errors.hpp"
#include "devo/harness/compare.hpp"
#include "devo/harness/config.hpp"
#include "devo/harness/export.hpp"
#include "devo/objectives/benchmarks.hpp"
#include "devo/objectives/external.hpp"
#include "devo/objectives/objective.hpp"
#include "devo/opt/config.hpp"
#include "devo/opt/de.hpp"
#include "devo/opt/ga.hpp"
#include "devo/opt/run.hpp"
#include "devo/opt/runlog.hpp"
#include "devo/parallel.hpp"
#include "devo/rng.hpp"
#include "devo/search_space.hpp"
