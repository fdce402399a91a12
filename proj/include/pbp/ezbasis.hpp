#pragma once

#include "pbp/jacobi.hpp"

namespace pbp {

// Normalized Eisenstein series E_4 or E_6 on SL2(Z) as a pure q-series
// (constant term 1), through q^q_order.
QSeriesTrunc eisenstein_series(long weight, long q_order);

// Monomial basis E_4^a E_6^b (4a + 6b = weight) of the level-one modular
// forms of the given even weight, in descending a; empty when the space
// is zero (negative or odd weight, or weight 2). Weight 0 gives {1}.
std::vector<QSeriesTrunc> m_sl2_basis(long weight, long q_order);

// The weak Jacobi forms generating the index-graded module:
//   phi_{-2,1} = theta^2 / eta^6        (weight -2, index 1)
//   phi_{0,1}  = 4 (f_2 + f_3 + f_4)    (weight 0, index 1)
//   phi_{-1,2} = theta(tau, 2z)/eta^3   (weight -1, index 2)
// with f_i(tau,z) = (theta_i(tau,z)/theta_i(tau,0))^2 built from the
// classical Jacobi theta constants on the q^(1/8) grid.
QSeriesTrunc phi_weak_m2_1(long q_order);
QSeriesTrunc phi_weak_0_1(long q_order);
QSeriesTrunc phi_weak_m1_2(long q_order);

// A spanning set of the weak Jacobi forms of weight k and index m:
// even k uses the free-module decomposition over the generators above,
// odd k multiplies the even space of weight k+1 and index m-2 by
// phi_{-1,2}. Deterministic order; integral coefficients.
std::vector<JacobiTrunc> jweak_basis(long k, long m, long q_order);

// The cusp subspace of jweak_basis: the saturated integer kernel of the
// map sending a weak form to its stored coefficients of discriminant
// 4nm - r^2 <= 0, returned as a provisioned BasisTrunc (elements carry
// "ez kernel <combination>" provenance).
BasisTrunc ez_cusp_basis(long k, long m, long q_order);

}  // namespace pbp
