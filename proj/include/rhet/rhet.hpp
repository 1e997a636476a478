#pragma once

#include "rhet/types.hpp"
#include "rhet/fft.hpp"
#include "rhet/parallel.hpp"
#include "rhet/analytic.hpp"
#include "rhet/synth.hpp"
#include "rhet/estimator.hpp"
#include "rhet/lockin.hpp"
#include "rhet/mapper.hpp"
#include "rhet/io.hpp"
