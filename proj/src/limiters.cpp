#include "cvxfem/limiters.hpp"

#include <algorithm>
#include <cmath>

namespace cvxfem {

ElementConstraints make_constraints(const Triple& gamma, const Triple& base, const Triple& u_min,
                                    const Triple& u_max) {
  ElementConstraints c;
  for (int i = 0; i < 3; ++i) {
    c.f_min[i] = gamma[i] * (u_min[i] - base[i]);
    c.f_max[i] = gamma[i] * (u_max[i] - base[i]);
  }
  return c;
}

LimitedContribution scaling_limiter(const Triple& f, const ElementConstraints& b) {
  LimitedContribution out;
  double alpha = 1.0;
  for (int i = 0; i < 3; ++i) {
    double a = 1.0;
    if (f[i] > b.f_max[i]) {
      a = b.f_max[i] / f[i];
    } else if (f[i] < b.f_min[i]) {
      a = b.f_min[i] / f[i];
    }
    // a < 0 only if the base state already violates its bounds
    out.alpha[i] = std::max(a, 0.0);
    alpha = std::min(alpha, out.alpha[i]);
  }
  out.alpha_element = alpha;
  for (int i = 0; i < 3; ++i) out.f_star[i] = alpha * f[i];
  return out;
}

Triple balance_sums(const Triple& f) {
  double pos = 0.0, neg = 0.0;
  for (double v : f) {
    pos += std::max(0.0, v);
    neg += std::min(0.0, v);
  }
  const double sum = pos + neg;
  Triple out = f;
  if (sum > 0.0) {
    const double s = -neg / pos;
    for (double& v : out) if (v > 0.0) v *= s;
  } else if (sum < 0.0) {
    const double s = -pos / neg;
    for (double& v : out) if (v < 0.0) v *= s;
  }
  return out;
}

Triple balance_within(const Triple& f, const Triple& lo, const Triple& hi) {
  const double sum = f[0] + f[1] + f[2];
  Triple room{};
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    room[i] = sum > 0.0 ? std::max(0.0, f[i] - lo[i]) : std::min(0.0, f[i] - hi[i]);
    total += room[i];
  }
  if (sum == 0.0) return f;
  Triple out = f;
  if (std::isinf(total)) {
    const int open = static_cast<int>(std::count_if(room.begin(), room.end(),
                                                    [](double r) { return std::isinf(r); }));
    for (int i = 0; i < 3; ++i) {
      if (std::isinf(room[i])) out[i] -= sum / open;
    }
    return out;
  }
  const double share = total != 0.0 ? std::min(1.0, sum / total) : 0.0;
  const double rest = (sum - share * total) / 3.0;
  for (int i = 0; i < 3; ++i) out[i] -= share * room[i] + rest;
  return out;
}

LimitedContribution clip_and_scale(const Triple& f, const ElementConstraints& b) {
  Triple clipped;
  for (int i = 0; i < 3; ++i) clipped[i] = std::max(b.f_min[i], std::min(f[i], b.f_max[i]));

  LimitedContribution out;
  out.f_star = balance_sums(clipped);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 3; ++i) {
    out.alpha[i] = f[i] != 0.0 ? out.f_star[i] / f[i] : 1.0;
    num += std::abs(out.f_star[i]);
    den += std::abs(f[i]);
  }
  out.alpha_element = den > 0.0 ? num / den : 1.0;
  return out;
}

LimitedContribution limit_scalar(ScalarLimiter limiter, const Triple& f,
                                 const ElementConstraints& bounds) {
  switch (limiter) {
    case ScalarLimiter::Scale:
      return scaling_limiter(f, bounds);
    case ScalarLimiter::ClipAndScale:
      return clip_and_scale(f, bounds);
    case ScalarLimiter::Unlimited: {
      LimitedContribution out;
      out.f_star = f;
      return out;
    }
    case ScalarLimiter::Zero: {
      LimitedContribution out;
      out.alpha = {0.0, 0.0, 0.0};
      out.alpha_element = 0.0;
      return out;
    }
  }
  return {};
}

ProductRulePrep product_rule_prepare(const Triple& f_rho_star, const Triple& f_rhophi,
                                     const Triple& base_rho, const Triple& base_rhophi,
                                     const Triple& gamma, const Triple& phi_min,
                                     const Triple& phi_max) {
  ProductRulePrep p;
  Triple delta, lo, hi;
  for (int i = 0; i < 3; ++i) {
    if (!(base_rho[i] > 0.0)) throw InadmissibleState("product-rule limiter: nonpositive base density");
    p.rho_star[i] = gamma[i] > 0.0 ? base_rho[i] + f_rho_star[i] / gamma[i] : base_rho[i];
    if (!(p.rho_star[i] > 0.0)) {
      throw InadmissibleState("product-rule limiter: nonpositive limited density " +
                              std::to_string(p.rho_star[i]));
    }
    delta[i] = base_rhophi[i] / base_rho[i] * f_rho_star[i];
    lo[i] = gamma[i] * (p.rho_star[i] * phi_min[i] - base_rhophi[i]);
    hi[i] = gamma[i] * (p.rho_star[i] * phi_max[i] - base_rhophi[i]);
  }
  p.shift = balance_within(delta, lo, hi);
  for (int i = 0; i < 3; ++i) {
    p.g[i] = f_rhophi[i] - p.shift[i];
    const double corr = gamma[i] > 0.0 ? p.shift[i] / gamma[i] : 0.0;
    p.phi_low[i] = (base_rhophi[i] + corr) / p.rho_star[i];
  }
  return p;
}

Triple product_rule_finish(const ProductRulePrep& prep, const Triple& phi_min,
                           const Triple& phi_max, const Triple& gamma, ScalarLimiter limiter) {
  ElementConstraints b;
  for (int i = 0; i < 3; ++i) {
    const double scale = gamma[i] * prep.rho_star[i];
    b.f_min[i] = scale * (phi_min[i] - prep.phi_low[i]);
    b.f_max[i] = scale * (phi_max[i] - prep.phi_low[i]);
  }
  const auto g_star = limit_scalar(limiter, prep.g, b);
  Triple f;
  for (int i = 0; i < 3; ++i) f[i] = prep.shift[i] + g_star.f_star[i];
  return f;
}

double idp_fix(const FluxModel& model, const LocalStates& base, const LocalStates& f_star,
               const Triple& gamma, int iterations) {
  for (int i = 0; i < 3; ++i) {
    if (!model.admissible(base[i], 0.0)) {
      throw InadmissibleState("IDP correction: low-order base state is not admissible");
    }
  }
  const auto admissible_at = [&](double alpha) {
    for (int i = 0; i < 3; ++i) {
      if (!(gamma[i] > 0.0)) continue;
      if (!model.admissible(base[i] + (alpha / gamma[i]) * f_star[i], 0.0)) return false;
    }
    return true;
  };
  if (admissible_at(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (admissible_at(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace cvxfem
