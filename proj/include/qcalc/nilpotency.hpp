#pragma once

// L-polynomials of the k-th differential of a function and the checks that
// the cyclic relations force d^N f = 0.

#include <cstdint>
#include <vector>

#include "qcalc/forms.hpp"
#include "qcalc/parallel.hpp"
#include "qcalc/report.hpp"

namespace qcalc {

/// L^{i1...im}_{(k)} in the raw algebra over (N, n). Indices are 1-based and
/// the result is symmetric in them. Throws BadIndexCount unless 1 <= m <= k.
/// L^i_{(k)} = d^k x^i, which is the zero form once k >= N.
Form l_poly(int N, int n, int k, const std::vector<int>& indices);

/// d^k f written as sum over index tuples of (partial derivatives) * L_{(k)},
/// computed in the raw algebra and then reduced in `target` (same N, n).
Form dk_expand(const CoeffPoly& f, int N, int k, Mode target = Mode::raw);

/// All multisets of size m drawn from 1..n, each sorted ascending.
std::vector<std::vector<int>> multisets(int n, int m);

/// Random f (degree <= 4), d^N f in the truncated algebra must be zero.
/// Each trial also compares dk_expand with iterated d in the raw algebra.
Report verify_dN_zero(int N, int n, int trials, std::uint64_t seed, int maxdeg = 4,
                      Execution exec = Execution::parallel);

/// Every condition L^{I}_{(N)} = 0 reduced with the cyclic relations.
Report verify_l_conditions(int N, int n, Execution exec = Execution::parallel);

/// Seed of trial t for a user seed; shared by every randomized suite.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t t);

}  // namespace qcalc
