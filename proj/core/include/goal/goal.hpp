#ifndef GOAL_GOAL_HPP
#define GOAL_GOAL_HPP

#include "goal/datagen.hpp"
#include "goal/error.hpp"
#include "goal/evaluation.hpp"
#include "goal/io.hpp"
#include "goal/matrix.hpp"
#include "goal/model.hpp"
#include "goal/numerics.hpp"
#include "goal/parallel.hpp"
#include "goal/scaling.hpp"

#endif  // GOAL_GOAL_HPP
