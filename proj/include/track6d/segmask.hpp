#pragma once

#include "track6d/segmask/mask.hpp"
#include "track6d/segmask/pipeline.hpp"
#include "track6d/segmask/providers.hpp"
