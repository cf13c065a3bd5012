#pragma once

#include "inertid/conic.hpp"
#include "inertid/consistency.hpp"
#include "inertid/dynamics.hpp"
#include "inertid/error.hpp"
#include "inertid/identification.hpp"
#include "inertid/interior_point.hpp"
#include "inertid/model.hpp"
#include "inertid/pipeline.hpp"
#include "inertid/spatial.hpp"
