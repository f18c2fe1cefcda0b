#pragma once

#include "jsp/model.hpp"
#include "jsp/qubo.hpp"
#include "jsp/classical.hpp"
#include "jsp/sampler.hpp"
#include "jsp/analysis.hpp"
