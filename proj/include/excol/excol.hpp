#pragma once

#include "excol/error.hpp"
#include "excol/lattice.hpp"
#include "excol/types.hpp"
#include "excol/fan.hpp"
#include "excol/cohomology.hpp"
#include "excol/split_bundle.hpp"
#include "excol/mutation.hpp"
#include "excol/verifier.hpp"
#include "excol/json_io.hpp"
#include "excol/sweep.hpp"
