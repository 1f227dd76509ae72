#pragma once

#include "cogmac/config.hpp"
#include "cogmac/contention.hpp"
#include "cogmac/error.hpp"
#include "cogmac/io.hpp"
#include "cogmac/optimizer.hpp"
#include "cogmac/parallel.hpp"
#include "cogmac/rng.hpp"
#include "cogmac/scenario.hpp"
#include "cogmac/sensing.hpp"
#include "cogmac/simulator.hpp"
#include "cogmac/specfun.hpp"
#include "cogmac/sweep.hpp"
#include "cogmac/throughput.hpp"
