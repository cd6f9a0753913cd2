#pragma once

#include "errors.hpp"
#include "special.hpp"
#include "parallel.hpp"
#include "density.hpp"
#include "quadrature.hpp"
#include "grid.hpp"
#include "stein.hpp"
#include "bounds.hpp"
#include "iterate.hpp"
#include "exact.hpp"
