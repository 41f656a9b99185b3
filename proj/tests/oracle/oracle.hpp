#pragma once

// Brute-force reference pooling for tests. Shares only the input types with
// the library: Mantel-Haenszel sums are formed in exact rationals and every
// other step runs in 50-digit decimal floating point.

#include <set>
#include <string>

#include "oeval/evidence.hpp"

namespace oracle {

struct Pooled {
    bool estimable = false;
    double estimate = 0.0;  // natural scale
    double ci_low = 0.0;
    double ci_high = 0.0;
    double tau2 = 0.0;
    double q = 0.0;
};

// Pools the rows of `outcome` whose study is in `included` (all rows when
// null) with the outcome's declared measure, method and model.
Pooled pool(const oeval::Outcome& outcome, const std::set<std::string>* included = nullptr);

}  // namespace oracle
