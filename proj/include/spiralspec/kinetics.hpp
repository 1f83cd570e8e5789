#ifndef SPIRALSPEC_KINETICS_HPP
#define SPIRALSPEC_KINETICS_HPP

#include <functional>
#include <stdexcept>
#include <string>

#include "spiralspec/types.hpp"

namespace spiralspec {

/// Reaction-diffusion model u_t = D Laplace(u) + f(u) with diagonal D > 0.
/// Immutable after construction and safe to share across threads.
struct ReactionModel {
  int n_components = 0;
  Vec diffusion;  // diagonal of D, all entries > 0
  std::function<Vec(const Vec&)> f;
  std::function<Mat(const Vec&)> f_u;
  std::string name;

  Vec rate(const Vec& state) const {
    if (state.size() != n_components)
      throw std::invalid_argument("state dimension mismatch for model " + name);
    return f(state);
  }
};

struct BarkleyParams {
  double a = 0.7;
  double b = 0.01;
  double eps = 0.02;
  double delta = 0.2;  // diffusion of the v-component
};

/// Two-component excitable kinetics
///   f1 = (1/eps) u (1-u) (u - (v+b)/a),  f2 = u - v,  D = diag(1, delta).
ReactionModel barkley_model(const BarkleyParams& p);

/// Lambda-omega kinetics with exact wave trains: for rho = u1^2 + u2^2,
///   f = (1-rho) u + (c0 + c2 rho + c3 rho^2) J u,  J = [[0,-1],[1,0]],  D = I.
/// Wave trains are u = sqrt(1-k^2) (cos, sin)(k x - omega t) with the exact
/// dispersion relation omega_nl(k) = -(c0 + c2 (1-k^2) + c3 (1-k^2)^2), so
/// c_g = 2 c2 k + 4 c3 k (1-k^2). Used as an analytic oracle.
ReactionModel lambda_omega_model(double c0, double c2, double c3 = 0.0);

/// Analytic Jacobian f_u(state); dimension-checked.
Mat jacobian(const ReactionModel& model, const Vec& state);

/// Central finite-difference Jacobian, the independent oracle for f_u.
Mat jacobian_fd(const ReactionModel& model, const Vec& state, double step = 1e-6);

/// Look up a registered model by name ("barkley", "lambda_omega");
/// params are keyed per model.
ReactionModel make_model(const std::string& name,
                         const std::function<double(const std::string&, double)>& param);

}  // namespace spiralspec

#endif
