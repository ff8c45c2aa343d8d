#pragma once

#include "wlsmin/ensemble.hpp"
#include "wlsmin/exact_core.hpp"
#include "wlsmin/fixed_trace.hpp"
#include "wlsmin/grid.hpp"
#include "wlsmin/kicked_tops.hpp"
#include "wlsmin/montecarlo.hpp"
#include "wlsmin/quadrature.hpp"
#include "wlsmin/rational_polynomial.hpp"
#include "wlsmin/serialization.hpp"
#include "wlsmin/spectral_densities.hpp"
#include "wlsmin/tracy_widom.hpp"
