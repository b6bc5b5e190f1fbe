#pragma once

#include <entconv/divergences.hpp>
#include <entconv/errors.hpp>
#include <entconv/forward_solver.hpp>
#include <entconv/frechet.hpp>
#include <entconv/general_criteria.hpp>
#include <entconv/linalg.hpp>
#include <entconv/ppt_geometry.hpp>
#include <entconv/rains.hpp>
#include <entconv/random.hpp>
#include <entconv/ree_converse.hpp>

#define ENTCONV_VERSION "0.1.0"
