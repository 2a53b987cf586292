#pragma once

#include "voi/chaining_bounds.hpp"
#include "voi/covering.hpp"
#include "voi/errors.hpp"
#include "voi/experiments.hpp"
#include "voi/gaussian_env.hpp"
#include "voi/increment_checker.hpp"
#include "voi/matrix_io.hpp"
#include "voi/metric_geometry.hpp"
#include "voi/random.hpp"
#include "voi/voi_estimator.hpp"
