#pragma once

// Umbrella header for the breathline toolkit: respiration-rate estimation
// from exhalation evidence in synchronized audio/frame streams.

#include "breathline/bandpass.hpp"
#include "breathline/core.hpp"
#include "breathline/features.hpp"
#include "breathline/json_io.hpp"
#include "breathline/labeler.hpp"
#include "breathline/linear_model.hpp"
#include "breathline/metrics.hpp"
#include "breathline/pgm.hpp"
#include "breathline/rng.hpp"
#include "breathline/simulate.hpp"
#include "breathline/tracker.hpp"
#include "breathline/wav.hpp"
