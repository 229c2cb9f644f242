// Umbrella header.
#pragma once

#include "eigrestrict/errors.hpp"
#include "eigrestrict/exponents.hpp"
#include "eigrestrict/specfun.hpp"
#include "eigrestrict/quadrature.hpp"
#include "eigrestrict/geometry.hpp"
#include "eigrestrict/systems.hpp"
#include "eigrestrict/norms.hpp"
#include "eigrestrict/experiments.hpp"
#include "eigrestrict/io.hpp"
#include "eigrestrict/cli.hpp"
