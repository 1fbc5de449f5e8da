#pragma once

#include "dccgarch/diagnostics.hpp"
#include "dccgarch/distributions.hpp"
#include "dccgarch/errors.hpp"
#include "dccgarch/mcmc.hpp"
#include "dccgarch/model.hpp"
#include "dccgarch/optimize.hpp"
#include "dccgarch/prior.hpp"
#include "dccgarch/types.hpp"
