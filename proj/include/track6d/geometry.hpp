#pragma once

#include "track6d/geometry/camera.hpp"
#include "track6d/geometry/crop.hpp"
#include "track6d/geometry/motion.hpp"
#include "track6d/geometry/pose.hpp"
#include "track6d/geometry/rotation.hpp"
#include "track6d/geometry/rotation_rep.hpp"
