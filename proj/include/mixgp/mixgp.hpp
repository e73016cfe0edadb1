#pragma once

#include "mixgp/benchmarks.hpp"
#include "mixgp/design_space.hpp"
#include "mixgp/doe.hpp"
#include "mixgp/errors.hpp"
#include "mixgp/gp.hpp"
#include "mixgp/io.hpp"
#include "mixgp/kernels.hpp"
#include "mixgp/optimizer.hpp"
