#pragma once

#include "sgm/core.hpp"
#include "sgm/rng.hpp"
#include "sgm/bitset.hpp"
#include "sgm/graph.hpp"
#include "sgm/support_index.hpp"
#include "sgm/canonical.hpp"
#include "sgm/sampler.hpp"
#include "sgm/topk_queue.hpp"
#include "sgm/oracle.hpp"
#include "sgm/generate.hpp"
#include "sgm/miner.hpp"
