#pragma once

/// Exact verification, certification and stress-testing of Efron-Stein-type
/// variance inequalities for coordinatewise dependent pairs.

#include "espair/accumulate.hpp"
#include "espair/error.hpp"
#include "espair/exact.hpp"
#include "espair/flows.hpp"
#include "espair/harmonic.hpp"
#include "espair/json_out.hpp"
#include "espair/matrix.hpp"
#include "espair/model.hpp"
#include "espair/random_models.hpp"
#include "espair/reproduce.hpp"
#include "espair/rng.hpp"
#include "espair/sampler.hpp"
#include "espair/spectral.hpp"

namespace espair {
inline constexpr const char* kVersion = "0.1.0";
}
