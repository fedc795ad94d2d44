#pragma once

#include "rff/data.hpp"
#include "rff/errors.hpp"
#include "rff/experiments.hpp"
#include "rff/features.hpp"
#include "rff/kernels.hpp"
#include "rff/model_io.hpp"
#include "rff/regression.hpp"
#include "rff/report.hpp"
#include "rff/spectral.hpp"
