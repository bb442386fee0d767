/// @file  coactive.hpp
/// @brief Convenience header pulling in the whole library.

#pragma once

#include "coactive/adversary.hpp"
#include "coactive/config.hpp"
#include "coactive/experiment.hpp"
#include "coactive/feedback.hpp"
#include "coactive/fit.hpp"
#include "coactive/items.hpp"
#include "coactive/learner.hpp"
#include "coactive/metrics.hpp"
#include "coactive/ranking.hpp"
#include "coactive/ratings.hpp"
#include "coactive/rng.hpp"
#include "coactive/svmlight.hpp"
#include "coactive/synthetic.hpp"
#include "coactive/vector.hpp"
