#pragma once

#include "track6d/metrics/pose_metrics.hpp"
#include "track6d/metrics/report.hpp"
