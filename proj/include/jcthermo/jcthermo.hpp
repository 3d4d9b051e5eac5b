#pragma once

#include "jcthermo/errors.hpp"
#include "jcthermo/core_hilbert.hpp"
#include "jcthermo/ode.hpp"
#include "jcthermo/dynamics.hpp"
#include "jcthermo/lambert_w.hpp"
#include "jcthermo/analytic.hpp"
#include "jcthermo/protocol.hpp"
#include "jcthermo/validation.hpp"
