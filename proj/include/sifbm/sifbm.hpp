#pragma once

// Umbrella header for the library (the JSON/CSV layer lives in sifbm/io.hpp).

#include "sifbm/covariance.hpp"
#include "sifbm/error.hpp"
#include "sifbm/flows.hpp"
#include "sifbm/increments.hpp"
#include "sifbm/index_collection.hpp"
#include "sifbm/matrix.hpp"
#include "sifbm/sampling.hpp"
#include "sifbm/spectra.hpp"
#include "sifbm/validation.hpp"
