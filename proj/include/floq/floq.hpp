#pragma once

// Umbrella header: periodic linear systems on finite projective towers,
// their monodromy, the compatible tower logarithm, and the Floquet-Liapunov
// reduction to constant coefficient.

#include "floq/cmatrix.hpp"
#include "floq/coefficient.hpp"
#include "floq/compatible_log.hpp"
#include "floq/errors.hpp"
#include "floq/floquet.hpp"
#include "floq/matrix_exp.hpp"
#include "floq/phi_series.hpp"
#include "floq/problem.hpp"
#include "floq/report.hpp"
#include "floq/solve.hpp"
#include "floq/tower.hpp"
#include "floq/trig_poly.hpp"
