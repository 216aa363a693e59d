// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include "lbsd/allocator.hpp"
#include "lbsd/csv_ingest.hpp"
#include "lbsd/error.hpp"
#include "lbsd/evaluator.hpp"
#include "lbsd/generator.hpp"
#include "lbsd/partitioner.hpp"
#include "lbsd/pipeline.hpp"
#include "lbsd/plan.hpp"
#include "lbsd/query.hpp"
#include "lbsd/replicator.hpp"
#include "lbsd/stats.hpp"
#include "lbsd/triple_store.hpp"
#include "lbsd/workload.hpp"
