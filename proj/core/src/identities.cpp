#include "spinspec/identities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinspec/error.hpp"

namespace spinspec {

IdentityReport make_report(std::string name, double left, double right, int n_cells) {
  IdentityReport r;
  r.name = std::move(name);
  r.left = left;
  r.right = right;
  r.residual = std::abs(left - right);
  r.n_cells = n_cells;
  return r;
}

double boundary_dirac_term(const SpinorField& phi, BoundarySide side) {
  const BoundaryDirac bd = boundary_dirac_matrix(phi.surface(), side, phi.mode());
  const Spinor t = phi.trace(side);
  return pairing(t, bd.normal_dirac * t).real();
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double gradient_squared(const SpinorField& phi, int j) {
  return phi.covariant(0, j).squaredNorm() + phi.covariant(1, j).squaredNorm();
}

// Sum over boundary circles of length * g(boundary data, trace).
template <class G>
double boundary_sum(const SpinorField& phi, G g) {
  double sum = 0.0;
  for (BoundarySide side : phi.surface().boundaries()) {
    const BoundaryData b = phi.surface().boundary_data(side);
    sum += two_pi * b.radius * g(b, side, phi.trace(side));
  }
  return sum;
}

// |nabla^{a,u}_i phi|^2 summed over i at node j. `q` selects the
// energy-momentum variant; otherwise lambda_j enters through (lambda/n) e^i.
double modified_density(const SpinorField& phi, int j, const RadialSample& a,
                        const RadialSample& u, double lambda_j, const Eigen::Matrix2d* q, int n) {
  const CliffordFrame& frame = make_frame();
  const Spinor& v = phi.values()[static_cast<std::size_t>(j)];
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    const Mat2& gi = frame.generator(i);
    Spinor w = phi.covariant(i, j);
    if (i == 0) w += a.value * u.d1 * v;
    w += (a.value / n) * u.d1 * (gi * (frame.generator(0) * v));
    if (q) {
      for (int l = 0; l < 2; ++l) w += (*q)(i, l) * (frame.generator(l) * v);
    } else {
      w += (lambda_j / n) * (gi * v);
    }
    sum += w.squaredNorm();
  }
  return sum;
}

double expanded_density(const SpinorField& phi, int j, const RadialSample& a,
                        const RadialSample& u, double lambda_j, const Eigen::Matrix2d* q, int n) {
  const Spinor& v = phi.values()[static_cast<std::size_t>(j)];
  const Spinor& dv = phi.radial_derivative()[static_cast<std::size_t>(j)];
  const double norm2 = v.squaredNorm();
  const double drop = q ? q->squaredNorm() : lambda_j * lambda_j / n;
  return gradient_squared(phi, j) - drop * norm2 +
         a.value * a.value * (1.0 - 1.0 / n) * u.d1 * u.d1 * norm2 +
         a.value * u.d1 * 2.0 * pairing(dv, v).real();
}

}  // namespace

IdentityReport sl_residual(const SpinorField& phi, std::optional<double> lambda) {
  const WarpedSurface& s = phi.surface();
  const double left = boundary_sum(phi, [&](const BoundaryData& b, BoundarySide side, const Spinor& t) {
    return boundary_dirac_term(phi, side) - 0.5 * b.mean_curvature * t.squaredNorm();
  });
  const double right = phi.integrate([&](int j) {
    const Spinor& v = phi.values()[static_cast<std::size_t>(j)];
    const double d2 = lambda ? (*lambda) * (*lambda) * v.squaredNorm() : phi.dirac(j).squaredNorm();
    return gradient_squared(phi, j) + 0.25 * s.scalar_curvature(phi.nodes()[j]) * v.squaredNorm() - d2;
  });
  return make_report("ili", left, right, phi.size());
}

IdentityReport rtc2_residual(const SpinorField& phi) {
  const WarpedSurface& s = phi.surface();
  const CliffordFrame& frame = make_frame();
  std::vector<Spinor> ambient(static_cast<std::size_t>(phi.size()));
  for (int j = 0; j < phi.size(); ++j) ambient[j] = phi.covariant(1, j);
  double worst = 0.0, left = 0.0, right = 0.0;
  for (BoundarySide side : s.boundaries()) {
    const BoundaryData b = s.boundary_data(side);
    const Spinor t = phi.trace(side);
    const Spinor intrinsic = Complex(0.0, phi.mode().k() / b.radius) * t;
    const Mat2 e0 = clifford_matrix(frame, b.normal);
    const Spinor restricted =
        phi.extrapolate(ambient, side) - 0.5 * b.mean_curvature * (e0 * (frame.generator(1) * t));
    const double diff = (intrinsic - restricted).norm();
    if (diff >= worst) {
      worst = diff;
      left = intrinsic.norm();
      right = restricted.norm();
    }
  }
  IdentityReport r = make_report("rtc2", left, right, phi.size());
  r.residual = worst;
  return r;
}

EnergyMomentum energy_momentum(const SpinorField& phi) {
  const CliffordFrame& frame = make_frame();
  EnergyMomentum em;
  double peak = 0.0;
  for (const auto& v : phi.values()) peak = std::max(peak, v.squaredNorm());
  em.epsilon = 1e-8 * peak;
  const int n = phi.size();
  em.q.assign(static_cast<std::size_t>(n), Eigen::Matrix2d::Zero());
  em.excluded.assign(static_cast<std::size_t>(n), false);
  for (int j = 0; j < n; ++j) {
    const Spinor& v = phi.values()[static_cast<std::size_t>(j)];
    const double norm2 = v.squaredNorm();
    if (!(norm2 >= em.epsilon) || norm2 == 0.0) {
      em.excluded[j] = true;
      ++em.excluded_count;
      continue;
    }
    std::array<Spinor, 2> grad{phi.covariant(0, j), phi.covariant(1, j)};
    Eigen::Matrix2d q;
    for (int a = 0; a < 2; ++a) {
      for (int b = a; b < 2; ++b) {
        const Spinor w = frame.generator(a) * grad[b] + frame.generator(b) * grad[a];
        q(a, b) = 0.5 * pairing(w, v).real() / norm2;
        q(b, a) = q(a, b);
      }
    }
    em.q[j] = q;
  }
  if (em.excluded_count == n) throw numerical_error("vanishing spinor");
  return em;
}

IdentityReport trace_q_residual(const SpinorField& phi, const EnergyMomentum& q, double lambda) {
  double worst = 0.0, at = lambda;
  for (int j = 0; j < phi.size(); ++j) {
    if (q.excluded[j]) continue;
    const double tr = q.q[j].trace();
    if (std::abs(tr - lambda) > worst) {
      worst = std::abs(tr - lambda);
      at = tr;
    }
  }
  return make_report("trace_q", at, lambda, phi.size());
}

IdentityReport modified_gradient_norm(const SpinorField& phi, const ModifierPair& mp,
                                      double lambda, GradientVariant variant, int n) {
  std::optional<EnergyMomentum> em;
  if (variant == GradientVariant::emtm) em = energy_momentum(phi);
  auto skip = [&](int j) { return em && em->excluded[j]; };
  auto qptr = [&](int j) -> const Eigen::Matrix2d* { return em ? &em->q[j] : nullptr; };
  const double direct = phi.integrate([&](int j) {
    if (skip(j)) return 0.0;
    const double r = phi.nodes()[j];
    return modified_density(phi, j, mp.a(r), mp.u(r), lambda, qptr(j), n);
  });
  const double expanded = phi.integrate([&](int j) {
    if (skip(j)) return 0.0;
    const double r = phi.nodes()[j];
    return expanded_density(phi, j, mp.a(r), mp.u(r), lambda, qptr(j), n);
  });
  return make_report(variant == GradientVariant::gcm ? "gcm" : "emtm", direct, expanded,
                     phi.size());
}

const char* to_string(EqVariant v) {
  switch (v) {
    case EqVariant::eq1: return "eq1";
    case EqVariant::eq2: return "eq2";
    case EqVariant::eq3: return "eq3";
    case EqVariant::eq4: return "eq4";
  }
  return "?";
}

IdentityReport eq_residual(const SpinorField& phi, double lambda, const ModifierPair& mp,
                           EqVariant which, const ConformalRescaling* rescaling, int n) {
  const WarpedSurface& s = phi.surface();
  const bool conformal = which == EqVariant::eq3 || which == EqVariant::eq4;
  const bool with_q = which == EqVariant::eq2 || which == EqVariant::eq4;
  if (conformal && !rescaling) throw config_error("eq3/eq4 need a conformal rescaling");
  if (conformal && (rescaling->source().name() != s.name() ||
                    rescaling->source().r_min() != s.r_min() ||
                    rescaling->source().r_max() != s.r_max())) {
    throw config_error("conformal rescaling does not start from the spinor's surface");
  }

  std::optional<EnergyMomentum> em;
  if (with_q) em = energy_momentum(phi);

  if (!conformal) {
    const double left = phi.integrate([&](int j) {
      if (em && em->excluded[j]) return 0.0;
      const double r = phi.nodes()[j];
      return modified_density(phi, j, mp.a(r), mp.u(r), lambda, em ? &em->q[j] : nullptr, n);
    });
    const double interior = phi.integrate([&](int j) {
      if (em && em->excluded[j]) return 0.0;
      const double r = phi.nodes()[j];
      const double norm2 = phi.values()[static_cast<std::size_t>(j)].squaredNorm();
      const double rau = modified_scalar(s, mp, r, n);
      const double bracket = with_q ? lambda * lambda - (0.25 * rau + em->q[j].squaredNorm())
                                    : (1.0 - 1.0 / n) * lambda * lambda - 0.25 * rau;
      return bracket * norm2;
    });
    const double boundary =
        boundary_sum(phi, [&](const BoundaryData& b, BoundarySide side, const Spinor& t) {
          const double du_e0 = b.normal_sign * mp.u(b.r).d1;
          return boundary_dirac_term(phi, side) +
                 (mp.a(b.r).value * du_e0 - 0.5 * b.mean_curvature) * t.squaredNorm();
        });
    return make_report(to_string(which), left, interior + boundary, phi.size());
  }

  // Target side: psi = e^{-u/2} phi with lambda e^{-u}, modifier (a, u) on the target.
  const ModifierPair source_mp{mp.a, rescaling->u(), mp.parameters};
  const ConformalPush push = conformal_push(phi, lambda, *rescaling);
  const SpinorField& psi = push.psi;
  const RadialFunction a_bar = rescaling->pull(mp.a);
  const RadialFunction u_bar = rescaling->u_on_target();
  std::optional<EnergyMomentum> em_bar;
  if (with_q) em_bar = energy_momentum(psi);
  const double left = psi.integrate([&](int j) {
    if (em_bar && em_bar->excluded[j]) return 0.0;
    const double sb = psi.nodes()[j];
    const RadialSample ub = u_bar(sb);
    const double lambda_bar = lambda * std::exp(-ub.value);
    return modified_density(psi, j, a_bar(sb), ub, lambda_bar, em_bar ? &em_bar->q[j] : nullptr, n);
  });
  const double interior = phi.integrate([&](int j) {
    if (em && em->excluded[j]) return 0.0;
    const double r = phi.nodes()[j];
    const double norm2 = phi.values()[static_cast<std::size_t>(j)].squaredNorm();
    const double rhat = conformal_modified_scalar(s, source_mp, r, n);
    const double bracket = with_q ? lambda * lambda - (0.25 * rhat + em->q[j].squaredNorm())
                                  : (1.0 - 1.0 / n) * lambda * lambda - 0.25 * rhat;
    return std::exp(-source_mp.u.value(r)) * bracket * norm2;
  });
  const double boundary =
      boundary_sum(phi, [&](const BoundaryData& b, BoundarySide side, const Spinor& t) {
        const RadialSample u = source_mp.u(b.r);
        const double du_e0 = b.normal_sign * u.d1;
        const double coef = mp.a(b.r).value - 0.5 * (n - 1.0);
        return std::exp(-u.value) * (boundary_dirac_term(phi, side) +
                                     (coef * du_e0 - 0.5 * b.mean_curvature) * t.squaredNorm());
      });
  return make_report(to_string(which), left, interior + boundary, phi.size());
}

double killing_residual(const SpinorField& phi, double lambda, const ModifierPair& mp, int n) {
  const CliffordFrame& frame = make_frame();
  double worst = 0.0;
  for (int j = 0; j < phi.size(); ++j) {
    const double r = phi.nodes()[j];
    const double a = mp.a.value(r);
    const double du = mp.u(r).d1;
    const Spinor& v = phi.values()[static_cast<std::size_t>(j)];
    for (int i = 0; i < 2; ++i) {
      const Mat2& gi = frame.generator(i);
      Spinor w = phi.covariant(i, j) + (lambda / n) * (gi * v);
      if (i == 0) w += a * du * v;
      w += (a / n) * du * (gi * (frame.generator(0) * v));
      worst = std::max(worst, w.norm());
    }
  }
  const double scale = phi.max_norm();
  if (!(scale > 0.0)) throw numerical_error("vanishing spinor");
  return worst / scale;
}

ConformalPush conformal_push(const SpinorField& phi, double lambda,
                             const ConformalRescaling& rescaling) {
  const RadialFunction& u = rescaling.u();
  SpinorField psi = SpinorField::sample(rescaling.target(), phi.mode(), phi.size(), [&](double sb) {
    const double r = std::clamp(rescaling.source_coordinate(sb), phi.surface().r_min(),
                                phi.surface().r_max());
    return Spinor(std::exp(-0.5 * u.value(r)) * phi.value_at(r));
  });
  const RadialFunction u_bar = rescaling.u_on_target();
  const double err = std::sqrt(psi.integrate([&](int j) {
    const double e = std::exp(-u_bar.value(psi.nodes()[j]));
    return (psi.dirac(j) - lambda * e * psi.values()[static_cast<std::size_t>(j)]).squaredNorm();
  }));
  const double norm = psi.l2_norm();
  if (!(norm > 0.0)) throw numerical_error("vanishing spinor");
  return {std::move(psi), err / norm};
}

double lichnerowicz_residual(const SpinorField& phi) {
  const CliffordFrame& frame = make_frame();
  const int n = phi.size();
  std::vector<Spinor> d(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) d[j] = phi.dirac(j);
  const std::vector<Spinor> dd = differentiate(d, phi.h());
  const std::vector<Spinor> v2 = differentiate(phi.radial_derivative(), phi.h());
  std::vector<double> defect(static_cast<std::size_t>(n), 0.0);
  for (int j = 2; j + 2 < n; ++j) {
    const Mat2 c2 = phi.angular_connection(j);
    const RadialSample& p = phi.profile()[static_cast<std::size_t>(j)];
    const Spinor& v = phi.values()[static_cast<std::size_t>(j)];
    const Spinor d2 = frame.generator(0) * dd[j] + frame.generator(1) * (c2 * d[j]);
    const Spinor rough = -v2[j] - (p.d1 / p.value) * phi.radial_derivative()[j] - c2 * (c2 * v);
    const double r = phi.nodes()[j];
    defect[j] = (d2 - rough - 0.25 * phi.surface().scalar_curvature(r) * v).squaredNorm();
  }
  return std::sqrt(phi.integrate([&](int j) { return defect[static_cast<std::size_t>(j)]; })) /
         phi.l2_norm();
}

}  // namespace spinspec
