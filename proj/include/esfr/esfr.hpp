#pragma once

// Umbrella header.

#include "esfr/approximants.hpp"
#include "esfr/errors.hpp"
#include "esfr/legendre.hpp"
#include "esfr/numerics/big_real.hpp"
#include "esfr/numerics/eigen.hpp"
#include "esfr/numerics/matrix.hpp"
#include "esfr/numerics/rational.hpp"
#include "esfr/operators.hpp"
#include "esfr/solver.hpp"
#include "esfr/spectrum.hpp"
