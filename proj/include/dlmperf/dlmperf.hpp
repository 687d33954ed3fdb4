#pragma once

#include "dlmperf/configs.hpp"
#include "dlmperf/kernel_cost.hpp"
#include "dlmperf/memory.hpp"
#include "dlmperf/phases.hpp"
#include "dlmperf/report.hpp"
#include "dlmperf/roofline.hpp"
#include "dlmperf/scenario_io.hpp"
#include "dlmperf/svg.hpp"
#include "dlmperf/sweep.hpp"
