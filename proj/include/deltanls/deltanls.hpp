#pragma once

#include "deltanls/errors.hpp"
#include "deltanls/core.hpp"
#include "deltanls/quadrature.hpp"
#include "deltanls/roots.hpp"
#include "deltanls/analytic.hpp"
#include "deltanls/variational.hpp"
#include "deltanls/probes.hpp"
#include "deltanls/phase.hpp"
#include "deltanls/io.hpp"
#include "deltanls/verify.hpp"
