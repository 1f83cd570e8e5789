#include "spiralspec/kinetics.hpp"

namespace spiralspec {

ReactionModel barkley_model(const BarkleyParams& p) {
  if (p.a <= 0.0) throw std::invalid_argument("barkley: a must be positive");
  if (p.eps <= 0.0) throw std::invalid_argument("barkley: eps must be positive");
  if (p.delta <= 0.0)
    throw std::invalid_argument(
        "barkley: delta must be positive (positive diagonal diffusion required)");

  ReactionModel m;
  m.n_components = 2;
  m.diffusion = Vec(2);
  m.diffusion << 1.0, p.delta;
  m.name = "barkley";
  const double a = p.a, b = p.b, inv_eps = 1.0 / p.eps;
  m.f = [=](const Vec& s) {
    const double u = s[0], v = s[1];
    Vec r(2);
    r[0] = inv_eps * u * (1.0 - u) * (u - (v + b) / a);
    r[1] = u - v;
    return r;
  };
  m.f_u = [=](const Vec& s) {
    const double u = s[0], v = s[1];
    const double th = (v + b) / a;
    Mat j(2, 2);
    j(0, 0) = inv_eps * ((1.0 - 2.0 * u) * (u - th) + u * (1.0 - u));
    j(0, 1) = -inv_eps * u * (1.0 - u) / a;
    j(1, 0) = 1.0;
    j(1, 1) = -1.0;
    return j;
  };
  return m;
}

ReactionModel lambda_omega_model(double c0, double c2, double c3) {
  ReactionModel m;
  m.n_components = 2;
  m.diffusion = Vec::Ones(2);
  m.name = "lambda_omega";
  m.f = [=](const Vec& s) {
    const double u1 = s[0], u2 = s[1];
    const double rho = u1 * u1 + u2 * u2;
    const double lam = 1.0 - rho, om = c0 + c2 * rho + c3 * rho * rho;
    Vec r(2);
    r[0] = lam * u1 - om * u2;
    r[1] = om * u1 + lam * u2;
    return r;
  };
  m.f_u = [=](const Vec& s) {
    const double u1 = s[0], u2 = s[1];
    const double rho = u1 * u1 + u2 * u2;
    const double lam = 1.0 - rho, om = c0 + c2 * rho + c3 * rho * rho;
    const double omp = c2 + 2.0 * c3 * rho;  // d omega / d rho
    Mat j(2, 2);
    j(0, 0) = lam - 2.0 * u1 * u1 - 2.0 * omp * u1 * u2;
    j(0, 1) = -om - 2.0 * u1 * u2 - 2.0 * omp * u2 * u2;
    j(1, 0) = om - 2.0 * u1 * u2 + 2.0 * omp * u1 * u1;
    j(1, 1) = lam - 2.0 * u2 * u2 + 2.0 * omp * u1 * u2;
    return j;
  };
  return m;
}

Mat jacobian(const ReactionModel& model, const Vec& state) {
  if (state.size() != model.n_components)
    throw std::invalid_argument("jacobian: state dimension mismatch");
  return model.f_u(state);
}

Mat jacobian_fd(const ReactionModel& model, const Vec& state, double step) {
  const int n = model.n_components;
  Mat j(n, n);
  for (int c = 0; c < n; ++c) {
    Vec sp = state, sm = state;
    sp[c] += step;
    sm[c] -= step;
    j.col(c) = (model.f(sp) - model.f(sm)) / (2.0 * step);
  }
  return j;
}

ReactionModel make_model(const std::string& name,
                         const std::function<double(const std::string&, double)>& param) {
  if (name == "barkley") {
    BarkleyParams p;
    p.a = param("a", p.a);
    p.b = param("b", p.b);
    p.eps = param("eps", p.eps);
    p.delta = param("delta", p.delta);
    return barkley_model(p);
  }
  if (name == "lambda_omega") {
    return lambda_omega_model(param("c0", 0.2), param("c2", 1.0), param("c3", 0.0));
  }
  throw std::invalid_argument("unknown model: " + name);
}

}  // namespace spiralspec
