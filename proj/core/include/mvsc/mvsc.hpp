#pragma once

#include "mvsc/data_io.hpp"
#include "mvsc/kernels.hpp"
#include "mvsc/metrics.hpp"
#include "mvsc/model.hpp"
#include "mvsc/pipeline.hpp"
#include "mvsc/solvers.hpp"
#include "mvsc/spectral.hpp"
