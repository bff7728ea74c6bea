#pragma once

#include "xxzent/linalg.hpp"
#include "xxzent/operators.hpp"
#include "xxzent/spectra.hpp"
#include "xxzent/effective.hpp"
#include "xxzent/dynamics.hpp"
#include "xxzent/experiments.hpp"
