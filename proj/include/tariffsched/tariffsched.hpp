#pragma once

#include "tariffsched/audit.hpp"
#include "tariffsched/generator.hpp"
#include "tariffsched/instance.hpp"
#include "tariffsched/json_io.hpp"
#include "tariffsched/makespan.hpp"
#include "tariffsched/oracle.hpp"
#include "tariffsched/placement.hpp"
#include "tariffsched/ptas.hpp"
#include "tariffsched/rational.hpp"
#include "tariffsched/seqdp.hpp"
#include "tariffsched/tariff.hpp"
