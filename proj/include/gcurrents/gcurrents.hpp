#pragma once

#include "gcurrents/builtin.hpp"
#include "gcurrents/calibration.hpp"
#include "gcurrents/competitors.hpp"
#include "gcurrents/currents.hpp"
#include "gcurrents/errors.hpp"
#include "gcurrents/geometry.hpp"
#include "gcurrents/group.hpp"
#include "gcurrents/json_io.hpp"
#include "gcurrents/metric_graph.hpp"
#include "gcurrents/rational.hpp"
#include "gcurrents/steiner.hpp"
#include "gcurrents/svg.hpp"
#include "gcurrents/transport.hpp"
