#include "adjcone/probes.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "adjcone/parallel.hpp"

namespace adjcone {

namespace {

Vector random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector u(n);
  do {
    for (int k = 0; k < n; ++k) u[k] = g(rng);
  } while (u.norm() < 1e-12);
  return u.normalized();
}

}  // namespace

UscReport usc_probe(const PolytopeMap& map, const Vector& x, const UscOptions& opt) {
  UscReport rep;
  rep.x = x;
  rep.radii = opt.radii;
  const int n = static_cast<int>(x.size());
  std::optional<Polytope> base;
  try {
    base = map(x);
  } catch (const std::exception&) {
    rep.holes = 1;
    rep.deviation.assign(opt.radii.size(), kInfinity);
    rep.monotone = false;
    rep.pass = false;
    return rep;
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t k = 0; k < opt.radii.size(); ++k) {
    const double r = opt.radii[k];
    auto rng = stream_rng(opt.seed, k);
    std::vector<Vector> pts;
    for (int i = 0; i < n; ++i) {
      pts.push_back(x + r * Vector::Unit(n, i));
      pts.push_back(x - r * Vector::Unit(n, i));
    }
    for (int s = 0; s < opt.samples_per_radius; ++s) {
      const double rad = r * std::pow(u(rng), 1.0 / n);
      pts.push_back(x + rad * random_unit(n, rng));
    }
    double dev = 0.0;
    for (const Vector& p : pts) {
      try {
        const Polytope img = map(p);
        for (const Vector& v : img.vertices()) dev = std::max(dev, project(*base, v).distance);
      } catch (const std::exception&) {
        ++rep.holes;
      }
    }
    rep.deviation.push_back(dev);
  }
  for (std::size_t k = 1; k < rep.deviation.size(); ++k) {
    if (rep.deviation[k] > rep.deviation[k - 1] + 1e-12) rep.monotone = false;
  }
  rep.pass = rep.monotone && rep.holes == 0 && !rep.deviation.empty() && rep.deviation.back() <= opt.tau;
  return rep;
}

ClosednessReport closedness_probe(const ConeMap& map, const Vector& x, const ClosednessOptions& opt) {
  const GeneratedCone Nx = map(x);
  const int n = static_cast<int>(x.size());
  const std::size_t S = static_cast<std::size_t>(std::max(opt.sequences, 0));
  std::vector<std::optional<ClosednessWitness>> bad(S);
  std::vector<int> settled(S, 0), holes(S, 0);
  parallel_for(S, [&](std::size_t s) {
    auto rng = stream_rng(opt.seed, s);
    const Vector dir = random_unit(n, rng);
    const Vector w = random_unit(n, rng);
    std::vector<std::optional<Vector>> picks;
    for (int k = 1; k <= opt.terms; ++k) {
      const Vector xk = x + std::pow(10.0, -k) * dir;
      std::optional<Vector> pick;
      try {
        const GeneratedCone N = map(xk);
        double best = -kInfinity;
        for (const Vector& g : N.generators()) {
          const Vector gu = g.normalized();
          if (gu.dot(w) > best) {
            best = gu.dot(w);
            pick = gu;
          }
        }
      } catch (const std::exception&) {
        ++holes[s];
      }
      picks.push_back(pick);
    }
    if (picks.size() < 2) return;
    const auto& last = picks[picks.size() - 1];
    const auto& prev = picks[picks.size() - 2];
    if (!last || !prev || (*last - *prev).norm() > opt.tau_cluster) return;
    settled[s] = 1;
    // First-order extrapolation of the tenfold-shrinking tail.
    const Vector limit = (*last + (*last - *prev) / 9.0).normalized();
    if (!cone_contains(Nx, limit, opt.tau_cone)) bad[s] = ClosednessWitness{dir, limit};
  });
  ClosednessReport rep;
  rep.sequences = static_cast<long>(S);
  for (std::size_t s = 0; s < S; ++s) {
    rep.settled += settled[s];
    rep.holes += holes[s];
    if (bad[s]) rep.violations.push_back(*bad[s]);
  }
  rep.pass = rep.violations.empty();
  return rep;
}

ClosednessReport closedness_probe(const StepLevelFunction& f, const Vector& x, const ClosednessOptions& opt,
                                  const NormalOpOptions& nopt) {
  if (!std::isfinite(evaluate(f, x, nopt.tol.feas))) throw InputError("closedness_probe: x outside the domain");
  if (in_argmin(f, x, nopt.tol.feas)) throw InputError("closedness_probe: x in argmin f");
  return closedness_probe([&](const Vector& y) { return adjusted_normal_cone(f, y, nopt); }, x, opt);
}

QuasimonotoneReport quasimonotonicity_probe(const ConeMap& map, const PointSampler& sampler,
                                            const QuasimonotoneOptions& opt) {
  const std::size_t P = static_cast<std::size_t>(std::max(opt.pairs, 0));
  std::vector<std::optional<QuasimonotoneViolation>> bad(P);
  std::vector<int> done(P, 0);
  parallel_for(P, [&](std::size_t i) {
    auto rng = stream_rng(opt.seed, i);
    const Vector x = sampler(rng);
    const Vector y = sampler(rng);
    GeneratedCone Nx(static_cast<int>(x.size()), {}), Ny = Nx;
    try {
      Nx = map(x);
      Ny = map(y);
    } catch (const std::exception&) {
      return;
    }
    done[i] = 1;
    const Vector d = y - x;
    for (const Vector& xs : Nx.generators()) {
      if (xs.normalized().dot(d) <= opt.tau_cone) continue;
      for (const Vector& ys : Ny.generators()) {
        if (ys.normalized().dot(d) < -opt.tau_cone) {
          bad[i] = QuasimonotoneViolation{x, y, xs.normalized(), ys.normalized()};
          return;
        }
      }
    }
  });
  QuasimonotoneReport rep;
  for (std::size_t i = 0; i < P; ++i) {
    rep.pairs += done[i];
    if (bad[i]) rep.violations.push_back(*bad[i]);
  }
  rep.pass = rep.violations.empty();
  return rep;
}

QuasimonotoneReport quasimonotonicity_probe(const StepLevelFunction& f, const QuasimonotoneOptions& opt,
                                            const NormalOpOptions& nopt) {
  std::vector<int> all(f.size());
  for (int j = 0; j < f.size(); ++j) all[j] = j;
  auto sampler = [&](std::mt19937_64& rng) {
    for (int a = 0; a < 10000; ++a) {
      const auto y = sample_union(f, all, rng);
      if (y && !in_argmin(f, *y, nopt.tol.feas)) return *y;
    }
    throw InputError("quasimonotonicity_probe: dom f \\ argmin f could not be sampled");
  };
  return quasimonotonicity_probe([&](const Vector& y) { return adjusted_normal_cone(f, y, nopt); }, sampler, opt);
}

}  // namespace adjcone
