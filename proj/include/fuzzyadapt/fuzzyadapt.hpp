#pragma once

// Umbrella header: transfer representation learning with TSK fuzzy
// systems. See README.md for the pipeline walkthrough.

#include "fuzzyadapt/dataset.hpp"
#include "fuzzyadapt/errors.hpp"
#include "fuzzyadapt/fuzzy.hpp"
#include "fuzzyadapt/io.hpp"
#include "fuzzyadapt/knn.hpp"
#include "fuzzyadapt/metrics.hpp"
#include "fuzzyadapt/model_io.hpp"
#include "fuzzyadapt/objective.hpp"
#include "fuzzyadapt/pca.hpp"
#include "fuzzyadapt/pipeline.hpp"
#include "fuzzyadapt/solver.hpp"
#include "fuzzyadapt/synthetic.hpp"
#include "fuzzyadapt/varpart.hpp"
