#pragma once

#include "zorbit/bigint.hpp"
#include "zorbit/cache.hpp"
#include "zorbit/decomposition.hpp"
#include "zorbit/divisibility.hpp"
#include "zorbit/errors.hpp"
#include "zorbit/factor.hpp"
#include "zorbit/orbit.hpp"
#include "zorbit/sweep.hpp"
