// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pkern/batched/dense_batch.hpp"
#include "pkern/batched/kernels.hpp"
#include "pkern/crs.hpp"
#include "pkern/error.hpp"
#include "pkern/graph/coloring.hpp"
#include "pkern/graph/graph_utils.hpp"
#include "pkern/graph/mis2.hpp"
#include "pkern/graph/verify.hpp"
#include "pkern/handle.hpp"
#include "pkern/hashmap_accumulator.hpp"
#include "pkern/io/generators.hpp"
#include "pkern/io/matrix_market.hpp"
#include "pkern/multivector.hpp"
#include "pkern/parallel.hpp"
#include "pkern/sort.hpp"
#include "pkern/spadd.hpp"
#include "pkern/spgemm.hpp"
#include "pkern/spmv.hpp"
#include "pkern/sptrsv.hpp"
#include "pkern/stencil.hpp"
#include "pkern/types.hpp"
