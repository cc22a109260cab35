#pragma once

#include "varlab/algorithms.hpp"
#include "varlab/compensated.hpp"
#include "varlab/csv.hpp"
#include "varlab/dataset.hpp"
#include "varlab/digits.hpp"
#include "varlab/errors.hpp"
#include "varlab/exact.hpp"
#include "varlab/harness.hpp"
#include "varlab/inference.hpp"
#include "varlab/mantissa.hpp"
#include "varlab/moment.hpp"
#include "varlab/pairwise.hpp"
#include "varlab/parallel.hpp"
#include "varlab/total_variance.hpp"
#include "varlab/two_pass.hpp"
#include "varlab/variance_result.hpp"
#include "varlab/welford.hpp"
