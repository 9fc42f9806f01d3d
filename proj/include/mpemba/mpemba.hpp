#pragma once

// Umbrella header.

#include "mpemba/a2.hpp"
#include "mpemba/artifact.hpp"
#include "mpemba/errors.hpp"
#include "mpemba/jacobi.hpp"
#include "mpemba/markov.hpp"
#include "mpemba/runner.hpp"
#include "mpemba/scenario.hpp"
#include "mpemba/spectral.hpp"
