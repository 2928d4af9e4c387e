#pragma once

#include <array>

#include "cvxfem/flux_models.hpp"
#include "cvxfem/spatial.hpp"

namespace cvxfem {

using Triple = std::array<double, 3>;

/// Scalar limiter applied to the three antidiffusive contributions of one
/// element. `Unlimited` returns f unchanged and `Zero` drops it; both exist
/// to recover the Galerkin and Rusanov schemes through the same drivers.
enum class ScalarLimiter { Scale, ClipAndScale, Unlimited, Zero };

/// Bounds f_i^{min} <= f_i^* <= f_i^{max} of one element.
struct ElementConstraints {
  Triple f_min{};
  Triple f_max{};
};

struct LimitedContribution {
  Triple f_star{};
  /// Scaling: nodal factors alpha_i^e, whose minimum is applied.
  /// Clip-and-scale: f_i^* / f_i (1 where f_i = 0).
  Triple alpha{1.0, 1.0, 1.0};
  double alpha_element = 1.0;
};

/// f_i^{min/max} = gamma_i (u_i^{min/max} - base_i).
ElementConstraints make_constraints(const Triple& gamma, const Triple& base, const Triple& u_min,
                                    const Triple& u_max);

/// Common correction factor alpha^e = min_i alpha_i^e.
LimitedContribution scaling_limiter(const Triple& f, const ElementConstraints& bounds);

/// Clip each f_i into its bounds, then rescale the positive or the negative
/// part so that the contributions sum to zero.
LimitedContribution clip_and_scale(const Triple& f, const ElementConstraints& bounds);

LimitedContribution limit_scalar(ScalarLimiter limiter, const Triple& f,
                                 const ElementConstraints& bounds);

/// Second step of clip-and-scale on its own: scale the positive or the
/// negative entries so the result sums to zero. Every entry keeps its sign
/// and shrinks in magnitude.
Triple balance_sums(const Triple& f);

/// Zero-sum correction of f that moves every entry only toward its own
/// bound: toward lo when the entries sum to a positive value, toward hi
/// otherwise. If lo <= f <= hi and sum lo <= 0 <= sum hi, the result is
/// zero-sum and stays within [lo, hi]. Whatever imbalance the available room
/// cannot absorb is spread evenly, so the result is always zero-sum.
Triple balance_within(const Triple& f, const Triple& lo, const Triple& hi);

/// Intermediate data of the product-rule limiter for one tracked ratio
/// phi = (rho phi) / rho on one element.
struct ProductRulePrep {
  Triple rho_star{};  // limited density states rho_i^{e,*}
  Triple shift{};     // R_S(delta f): phi_i * f_{i,rho}^* rebalanced to zero sum
  Triple g{};         // f_{rho phi} - R_S(delta f)
  Triple phi_low{};   // ratio states bounding the C&S step
};

/// delta f, R_S, g and the ratio states phi_i^{e,L}. R_S is
/// balance_within against the bounds rho_i^* phi^{min/max}, so phi_i^{e,L}
/// stays inside [phi_min, phi_max] whenever the base ratios do. Throws
/// InadmissibleState for a nonpositive limited density.
ProductRulePrep product_rule_prepare(const Triple& f_rho_star, const Triple& f_rhophi,
                                     const Triple& base_rho, const Triple& base_rhophi,
                                     const Triple& gamma, const Triple& phi_min,
                                     const Triple& phi_max);

/// Limit g against rho^* phi^{min/max} with the selected
/// scalar limiter and return f^*_{rho phi} = R_S(delta f) + g^*.
Triple product_rule_finish(const ProductRulePrep& prep, const Triple& phi_min,
                           const Triple& phi_max, const Triple& gamma, ScalarLimiter limiter);

/// Largest alpha in [0, 1] found by bisection such that
/// base_i + alpha f_i / gamma_i is admissible for all local nodes. Nodes with
/// gamma_i = 0 carry no correction and are skipped.
double idp_fix(const FluxModel& model, const LocalStates& base, const LocalStates& f_star,
               const Triple& gamma, int iterations = 30);

}  // namespace cvxfem
