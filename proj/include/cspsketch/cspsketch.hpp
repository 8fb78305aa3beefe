#pragma once

// Umbrella header.

#include "cspsketch/core/binomial.hpp"
#include "cspsketch/core/formulas.hpp"
#include "cspsketch/core/predicate.hpp"
#include "cspsketch/core/symmetric_dist.hpp"

#include "cspsketch/alpha/alpha_numeric.hpp"
#include "cspsketch/alpha/certificate.hpp"
#include "cspsketch/alpha/closed_forms.hpp"
#include "cspsketch/alpha/max_min.hpp"
#include "cspsketch/alpha/padded.hpp"
#include "cspsketch/alpha/simplex_scan.hpp"
#include "cspsketch/alpha/support2.hpp"
#include "cspsketch/alpha/uniqueness3and.hpp"

#include "cspsketch/stream/bias_bounds.hpp"
#include "cspsketch/stream/estimate.hpp"
#include "cspsketch/stream/generate.hpp"
#include "cspsketch/stream/instance.hpp"
#include "cspsketch/stream/instance_io.hpp"
#include "cspsketch/stream/l1_sketch.hpp"
#include "cspsketch/stream/oracle.hpp"

#include "cspsketch/util/errors.hpp"
#include "cspsketch/util/parallel.hpp"
#include "cspsketch/util/rng.hpp"
