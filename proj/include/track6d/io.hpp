#pragma once

#include "track6d/io/json_util.hpp"
#include "track6d/io/png_io.hpp"
#include "track6d/io/result_io.hpp"
#include "track6d/io/schema.hpp"
#include "track6d/io/schemas.hpp"
#include "track6d/io/sequence_io.hpp"
