#pragma once

#include "dsmf/errors.hpp"
#include "dsmf/frame.hpp"
#include "dsmf/expression.hpp"
#include "dsmf/bba.hpp"
#include "dsmf/rules.hpp"
#include "dsmf/decision.hpp"
#include "dsmf/expert_models.hpp"
#include "dsmf/io.hpp"
#include "dsmf/statistics.hpp"
#include "dsmf/generator.hpp"
#include "dsmf/experiment.hpp"
