#ifndef EXPNEED_EXPNEED_HPP
#define EXPNEED_EXPNEED_HPP

#include "expneed/agreement.hpp"
#include "expneed/classifiers/grid_search.hpp"
#include "expneed/classifiers/model.hpp"
#include "expneed/corpus.hpp"
#include "expneed/evaluation/detector.hpp"
#include "expneed/evaluation/harness.hpp"
#include "expneed/evaluation/metrics.hpp"
#include "expneed/evaluation/report.hpp"
#include "expneed/evaluation/sampling.hpp"
#include "expneed/features.hpp"
#include "expneed/rule_based.hpp"

#endif
