#pragma once

#include "npci/ciprocess.hpp"
#include "npci/dgp.hpp"
#include "npci/error.hpp"
#include "npci/lineargc.hpp"
#include "npci/mc.hpp"
#include "npci/resample.hpp"
#include "npci/sample.hpp"
#include "npci/smoothing.hpp"
#include "npci/teststats.hpp"
