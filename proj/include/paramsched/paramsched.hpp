#pragma once

#include "paramsched/model.hpp"
#include "paramsched/priority.hpp"
#include "paramsched/selection.hpp"
#include "paramsched/scheduler.hpp"
#include "paramsched/io.hpp"
#include "paramsched/datagen.hpp"
#include "paramsched/bench.hpp"
