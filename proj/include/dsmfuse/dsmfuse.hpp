#pragma once

#include "dsmfuse/error.hpp"
#include "dsmfuse/interval_set.hpp"
#include "dsmfuse/hyper_power_set.hpp"
#include "dsmfuse/model.hpp"
#include "dsmfuse/mass.hpp"
#include "dsmfuse/fusion.hpp"
