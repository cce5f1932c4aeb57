#pragma once

#include "cardimax/types.hpp"
#include "cardimax/solver.hpp"
#include "cardimax/sink.hpp"
#include "cardimax/totalizer.hpp"
#include "cardimax/maxsat.hpp"
#include "cardimax/algorithms.hpp"
#include "cardimax/wcnf.hpp"
#include "cardimax/oracle.hpp"
#include "cardimax/generator.hpp"
#include "cardimax/bench.hpp"
