#pragma once

// Umbrella header: the whole library.

#include "bohr/backend.hpp"
#include "bohr/context.hpp"
#include "bohr/dasein.hpp"
#include "bohr/dot.hpp"
#include "bohr/errors.hpp"
#include "bohr/interval.hpp"
#include "bohr/kscheck.hpp"
#include "bohr/linops.hpp"
#include "bohr/logic.hpp"
#include "bohr/matrix.hpp"
#include "bohr/serialize.hpp"
#include "bohr/states.hpp"
