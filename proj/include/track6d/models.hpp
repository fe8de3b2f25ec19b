#pragma once

#include "track6d/models/checkpoint.hpp"
#include "track6d/models/encoder.hpp"
#include "track6d/models/losses.hpp"
#include "track6d/models/motion_model.hpp"
#include "track6d/models/regressor.hpp"
#include "track6d/models/temporal.hpp"
#include "track6d/models/train.hpp"
