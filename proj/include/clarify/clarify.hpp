#pragma once

#include "clarify/collision.hpp"
#include "clarify/colorspace.hpp"
#include "clarify/dot.hpp"
#include "clarify/error.hpp"
#include "clarify/gamut.hpp"
#include "clarify/geometry.hpp"
#include "clarify/optimizer.hpp"
#include "clarify/palette.hpp"
#include "clarify/pipeline.hpp"
#include "clarify/render.hpp"
#include "clarify/spatial_index.hpp"
