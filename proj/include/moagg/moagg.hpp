#pragma once

#include "moagg/cart.hpp"
#include "moagg/dataset.hpp"
#include "moagg/errors.hpp"
#include "moagg/evaluation.hpp"
#include "moagg/game.hpp"
#include "moagg/interval.hpp"
#include "moagg/satisficing.hpp"
#include "moagg/scalarize.hpp"
#include "moagg/solvers.hpp"
#include "moagg/synthetic.hpp"
#include "moagg/weighted.hpp"
