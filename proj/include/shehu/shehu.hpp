#pragma once

#include "shehu/errors.hpp"
#include "shehu/types.hpp"
#include "shehu/specfun.hpp"
#include "shehu/quadrature.hpp"
#include "shehu/field.hpp"
#include "shehu/fracops.hpp"
#include "shehu/forward.hpp"
#include "shehu/contour.hpp"
#include "shehu/inverse.hpp"
#include "shehu/opcalc.hpp"
#include "shehu/verify.hpp"
#include "shehu/grid.hpp"
#include "shehu/fpde.hpp"
#include "shehu/fd_oracle.hpp"
#include "shehu/compare.hpp"
