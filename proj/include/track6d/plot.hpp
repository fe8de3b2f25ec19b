#pragma once

#include "track6d/plot/chart.hpp"
#include "track6d/plot/font5x7.hpp"
#include "track6d/plot/report_plots.hpp"
