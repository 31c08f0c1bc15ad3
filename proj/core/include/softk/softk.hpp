#pragma once

#include "softk/errors.hpp"
#include "softk/funcalg.hpp"
#include "softk/homotopy.hpp"
#include "softk/io.hpp"
#include "softk/matrix.hpp"
#include "softk/pairs.hpp"
#include "softk/random.hpp"
#include "softk/reduction.hpp"
#include "softk/universal.hpp"
