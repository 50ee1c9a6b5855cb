// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "analysis.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "error.hpp"
#include "model.hpp"
#include "montecarlo.hpp"
#include "numerics.hpp"
#include "optimizer.hpp"
