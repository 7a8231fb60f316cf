#pragma once

// Everything except the command-line front end.

#include "foamlab/errors.hpp"
#include "foamlab/tolerance.hpp"
#include "foamlab/geometry.hpp"
#include "foamlab/cluster.hpp"
#include "foamlab/equilibrium.hpp"
#include "foamlab/variation.hpp"
#include "foamlab/constructions.hpp"
#include "foamlab/desitter.hpp"
#include "foamlab/codec.hpp"
#include "foamlab/svg.hpp"
