#pragma once

#include "oneshot/linop.hpp"
#include "oneshot/quantum.hpp"

namespace oneshot {

inline constexpr double kBallSlack = 1e-9;

// || sqrt(a) sqrt(b) ||_1 for PSD a, b (tiny negative eigenvalues clipped).
double root_overlap(const HermitianOperator& a, const HermitianOperator& b);

// Generalized fidelity ||sqrt(rho) sqrt(sigma)||_1 + sqrt((1 - tr rho)(1 - tr sigma)), clamped to [0, 1].
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);
double purified_distance(const DensityOperator& rho, const DensityOperator& sigma);
// Same quantities for two (possibly subnormalized) pure states.
double fidelity(const Purification& phi, const Purification& theta);
double purified_distance(const Purification& phi, const Purification& theta);

// 1/2 ||rho - sigma||_1 + 1/2 |tr rho - tr sigma|
double trace_distance_generalized(const DensityOperator& rho, const DensityOperator& sigma);

bool in_ball(const DensityOperator& candidate, const DensityOperator& rho, double eps);

// Throws SmoothingParameterError unless 0 <= eps < sqrt(trace).
void require_smoothing_radius(double eps, double trace);

// A purification of sigma on the same ancilla as phi whose overlap with phi
// attains the fidelity of the reduced states. Needs ancilla_dim >= rank(sigma).
Purification uhlmann_partner(const Purification& phi, const DensityOperator& sigma);

// An extension of sigma (on H) with the same purified distance to rho_ext
// (on H (x) H') as sigma has to tr_H'(rho_ext).
DensityOperator extension_partner(const DensityOperator& rho_ext, const DensityOperator& sigma);

}  // namespace oneshot
