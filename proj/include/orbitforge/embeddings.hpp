#pragma once

#include "orbitforge/lie_algebra.hpp"

namespace orbitforge {

/// u(l) element in real-pair form M = A + iB (A skew, B symmetric, both l x l).
struct UnitaryPair {
  Matrix<double> a;
  Matrix<double> b;
};

UnitaryPair to_pair(const AlgebraElement<Complex>& m);
AlgebraElement<Complex> from_pair(const UnitaryPair& p);

/// u(l) -> so(2l):  A + iB  |->  [[A, B], [-B, A]].
AlgebraElement<double> embed_tau(const AlgebraElement<Complex>& m);

/// u(l) -> so(2l+1): the block image of embed_tau followed by diag(., 0).
AlgebraElement<double> embed_tau_prime(const AlgebraElement<Complex>& m);

/// so(2m+1) (+) so(2k) -> so(2l+1) with k = l - m, interleaving the blocks
///
///   Q1 = [[V, U, E], [-U^t, W, F], [-E^t, -F^t, 0]]   (block sizes m, m, 1)
///   Q2 = [[A, B], [-B^t, C]]                          (block sizes k, k)
///
/// into rows/columns ordered (V-block, A-block, W-block, C-block, last axis).
AlgebraElement<double> embed_sigma(int m, int l, const AlgebraElement<double>& q1, const AlgebraElement<double>& q2);

/// Index map used by embed_sigma: position of row r of Q1 (or Q2) inside so(2l+1).
std::size_t sigma_index_q1(int m, int l, std::size_t r);
std::size_t sigma_index_q2(int m, int l, std::size_t r);

/// sp(l) -> su(2l):  X + jY  |->  [[X, -conj(Y)], [Y, conj(X)]].
Matrix<Complex> embed_dpi(const AlgebraElement<Quaternion>& w);

}  // namespace orbitforge
