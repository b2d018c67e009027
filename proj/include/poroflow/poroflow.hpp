#pragma once

#include "poroflow/bench.hpp"
#include "poroflow/config_file.hpp"
#include "poroflow/errors.hpp"
#include "poroflow/grid.hpp"
#include "poroflow/grid_io.hpp"
#include "poroflow/kalman.hpp"
#include "poroflow/metrics.hpp"
#include "poroflow/ncdf.hpp"
#include "poroflow/noise.hpp"
#include "poroflow/phantom.hpp"
#include "poroflow/pipeline.hpp"
#include "poroflow/poro.hpp"
#include "poroflow/svg_plot.hpp"
#include "poroflow/version.hpp"
