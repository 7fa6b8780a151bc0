#pragma once

#include "parasol/core.hpp"
#include "parasol/policy.hpp"
#include "parasol/flat_table.hpp"
#include "parasol/weeping_tree.hpp"
#include "parasol/miner.hpp"
#include "parasol/compress.hpp"
#include "parasol/fimi.hpp"
#include "parasol/metrics.hpp"
#include "parasol/synthetic.hpp"
#include "parasol/oracle.hpp"
