// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "macrocap/capacity_approx.hpp"
#include "macrocap/capacity_bounds.hpp"
#include "macrocap/capacity_exact.hpp"
#include "macrocap/channel.hpp"
#include "macrocap/combinatorics.hpp"
#include "macrocap/errors.hpp"
#include "macrocap/linalg.hpp"
#include "macrocap/matrix.hpp"
#include "macrocap/montecarlo.hpp"
#include "macrocap/poly.hpp"
#include "macrocap/quadrature.hpp"
#include "macrocap/rng.hpp"
#include "macrocap/specfun.hpp"
