#pragma once

#include "pentamotion/common.hpp"
#include "pentamotion/design.hpp"
#include "pentamotion/geometry.hpp"
#include "pentamotion/homog_poly.hpp"
#include "pentamotion/pose.hpp"
#include "pentamotion/reality.hpp"
#include "pentamotion/roots.hpp"
#include "pentamotion/selfmotion.hpp"
#include "pentamotion/surface.hpp"
#include "pentamotion/verify.hpp"
