#pragma once

#include "walsheq/dyadic.hpp"
#include "walsheq/rng.hpp"
#include "walsheq/gf2.hpp"
#include "walsheq/ordering.hpp"
#include "walsheq/parallel.hpp"
#include "walsheq/functions.hpp"
#include "walsheq/combinatorics.hpp"
#include "walsheq/perturbation.hpp"
#include "walsheq/search.hpp"
#include "walsheq/ordering_spec.hpp"
#include "walsheq/report.hpp"
