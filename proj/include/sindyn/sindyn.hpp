#pragma once

// Convenience umbrella: the whole toolkit in one include.

#include "sindyn/constants.hpp"
#include "sindyn/complexfn.hpp"
#include "sindyn/family.hpp"
#include "sindyn/magnitude.hpp"
#include "sindyn/newton.hpp"
#include "sindyn/orbit.hpp"
#include "sindyn/periodic_points.hpp"
#include "sindyn/escape.hpp"
#include "sindyn/hair.hpp"
#include "sindyn/atlas.hpp"
#include "sindyn/render.hpp"
#include "sindyn/parse.hpp"
#include "sindyn/report.hpp"
