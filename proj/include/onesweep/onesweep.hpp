#pragma once

#include "onesweep/baseline.hpp"
#include "onesweep/binning.hpp"
#include "onesweep/executor.hpp"
#include "onesweep/histogram.hpp"
#include "onesweep/keycodec.hpp"
#include "onesweep/keygen.hpp"
#include "onesweep/lookback.hpp"
#include "onesweep/ranking.hpp"
