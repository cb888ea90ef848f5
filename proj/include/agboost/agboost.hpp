#pragma once

#include "boosting.hpp"
#include "core.hpp"
#include "errors.hpp"
#include "hadamard.hpp"
#include "hardness.hpp"
#include "oracle.hpp"
#include "rng.hpp"
#include "weaklearn.hpp"
