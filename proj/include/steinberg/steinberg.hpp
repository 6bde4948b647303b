#pragma once

#include "steinberg/exactalg.hpp"
#include "steinberg/quadfield.hpp"
#include "steinberg/projline.hpp"
#include "steinberg/voronoi.hpp"
#include "steinberg/modsym.hpp"
#include "steinberg/unital.hpp"
#include "steinberg/ane.hpp"
#include "steinberg/psi.hpp"
#include "steinberg/table.hpp"
