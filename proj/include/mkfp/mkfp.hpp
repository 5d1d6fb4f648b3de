#pragma once

#include "mkfp/rational.hpp"
#include "mkfp/metric_core.hpp"
#include "mkfp/piecewise.hpp"
#include "mkfp/modulus.hpp"
#include "mkfp/witnesses.hpp"
#include "mkfp/fixed_point.hpp"
#include "mkfp/ordered_models.hpp"
#include "mkfp/io.hpp"
