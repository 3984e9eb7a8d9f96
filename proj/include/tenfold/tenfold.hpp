#pragma once

#include "tenfold/checks.hpp"
#include "tenfold/densities.hpp"
#include "tenfold/ensembles.hpp"
#include "tenfold/equilibrium.hpp"
#include "tenfold/error.hpp"
#include "tenfold/experiments.hpp"
#include "tenfold/io.hpp"
#include "tenfold/ratefn.hpp"
#include "tenfold/sampler.hpp"
#include "tenfold/spectra.hpp"
#include "tenfold/structure.hpp"
