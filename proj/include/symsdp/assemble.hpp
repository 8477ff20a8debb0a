#pragma once

#include "symsdp/relaxation.hpp"
#include "symsdp/reptheory.hpp"
#include "symsdp/sdp.hpp"

namespace symsdp {

// One block: Z(y) = sum_k y_k A_k.
BlockSdpProblem moment_problem(const MomentStructure& ms);

// Blocks Z~^(i)(y~) = sum_l y~_l A~_l^(i) with A~_l^(i) read off I^{-1} A'_l I^{-dagger}.
BlockSdpProblem symmetrized_problem(const SymmetrizedMoments& sm, const IsotypicDecomposition<Scalar>& dec);
BlockSdpProblem symmetrized_problem(const SymmetrizedMoments& sm, const IsotypicDecomposition<Complex>& dec);

}  // namespace symsdp
