#pragma once

#include "track6d/tracker/model_predictor.hpp"
#include "track6d/tracker/predictor.hpp"
#include "track6d/tracker/tracker.hpp"
