#pragma once

// Numerics only; config.hpp, output.hpp and driver.hpp add the file-based front end.
#include "sspop/analysis.hpp"
#include "sspop/coefficients.hpp"
#include "sspop/error.hpp"
#include "sspop/experiments.hpp"
#include "sspop/grid.hpp"
#include "sspop/hopf.hpp"
#include "sspop/presets.hpp"
#include "sspop/quadrature.hpp"
#include "sspop/schemes.hpp"
#include "sspop/special_functions.hpp"
