#pragma once

#include "qpo/io.hpp"
#include "qpo/maps.hpp"
#include "qpo/projection.hpp"
#include "qpo/spectrum.hpp"
#include "qpo/summation.hpp"
#include "qpo/weights.hpp"
#include "qpo/xreal.hpp"
