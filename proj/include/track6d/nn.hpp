#pragma once

#include "track6d/nn/adam.hpp"
#include "track6d/nn/layers.hpp"
#include "track6d/nn/param.hpp"
#include "track6d/nn/tensor4.hpp"
