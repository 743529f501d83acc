#pragma once

#include "kgshard/bench.hpp"
#include "kgshard/clustering.hpp"
#include "kgshard/config.hpp"
#include "kgshard/error.hpp"
#include "kgshard/exec.hpp"
#include "kgshard/features.hpp"
#include "kgshard/partitioner.hpp"
#include "kgshard/query.hpp"
#include "kgshard/rational.hpp"
#include "kgshard/rdf.hpp"
#include "kgshard/rewriter.hpp"
