// Umbrella header.
#pragma once

#include "npick/error.hpp"
#include "npick/polynomial.hpp"
#include "npick/rational_inner.hpp"
#include "npick/curve.hpp"
#include "npick/kernel_space.hpp"
#include "npick/pick.hpp"
#include "npick/json_io.hpp"
