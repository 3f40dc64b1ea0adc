#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "mwl/ddvv.hpp"
#include "mwl/geometry.hpp"
#include "mwl/moebius.hpp"

namespace mwl {

/// One scan sample. Numeric fields are absent when the point errored
/// (umbilic locus, pole proximity); errors are data, not crashes.
struct ScanRecord {
  Vec point;
  std::optional<double> gap, rho_curv, rho_perp, h2;  // metric-level DDVV
  std::optional<double> b_norm2;
  std::optional<double> phi_norm;
  std::optional<double> mu0;
  bool certified = false;
  std::string status = "ok";
  std::string tol_class = "jet";
};

struct ScanOptions {
  bool with_moebius = true;  // b_norm2 + certificate (jet-exact)
  bool with_phi = false;     // FD Moebius form per record
  FieldDerivativeSpec fd;
  double certificate_tol = 1e-7;
};

struct GridSpec {
  bool random = false;
  int n = 10;           // per axis (grid) or total count (random)
  uint64_t seed = 0;
};

inline std::vector<Vec> sample_points(const Box& region, const GridSpec& g) {
  const int dim = region.dim();
  std::vector<Vec> pts;
  if (g.random) {
    Rng rng(g.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    pts.reserve(g.n);
    for (int i = 0; i < g.n; ++i) {
      Vec p(dim);
      for (int a = 0; a < dim; ++a)
        p[a] = region.lo[a] + (region.hi[a] - region.lo[a]) * unif(rng);
      pts.push_back(p);
    }
  } else {
    // Row-major grid, n points per axis, endpoints included.
    std::vector<int> idx(dim, 0);
    const long total = static_cast<long>(std::pow(g.n, dim));
    pts.reserve(total);
    for (long k = 0; k < total; ++k) {
      Vec p(dim);
      long rem = k;
      for (int a = dim - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(rem % g.n);
        rem /= g.n;
      }
      for (int a = 0; a < dim; ++a) {
        const double t = g.n == 1 ? 0.5 : static_cast<double>(idx[a]) / (g.n - 1);
        p[a] = region.lo[a] + (region.hi[a] - region.lo[a]) * t;
      }
      pts.push_back(p);
    }
  }
  return pts;
}

inline int probe_thread_count() {
  const char* env = std::getenv("MWL_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

inline ScanRecord scan_point(const Immersion& im, const Vec& u,
                             const ScanOptions& opt) {
  ScanRecord rec;
  rec.point = u;
  rec.tol_class = opt.with_phi ? "fd" : "jet";
  try {
    FundamentalForms ff = fundamental_forms(im, u);
    DdvvReport rep = ddvv_report(shape_operators(ff), ff.c);
    rec.gap = rep.gap;
    rec.rho_curv = rep.rho;
    rec.rho_perp = rep.rho_perp;
    rec.h2 = rep.h2;
    if (opt.with_moebius) {
      Immersion euclid = euclideanize_at(im, u);
      FundamentalForms ffe = fundamental_forms(euclid, u);
      std::vector<Mat> b = moebius_B_of(ffe);  // throws UmbilicError if umbilic
      double bn = 0.0;
      for (const auto& op : b) bn += op.squaredNorm();
      rec.b_norm2 = bn;
      auto cert = wintgen_certificate(b, opt.certificate_tol);
      if (cert) {
        rec.certified = true;
        rec.mu0 = cert->mu0;
      }
      if (opt.with_phi) {
        MoebiusForm mf = moebius_form(euclid, u, opt.fd);
        rec.phi_norm = std::sqrt(mf.phi_norm2);
      }
    }
  } catch (const Error& e) {
    rec.status = e.what();
  }
  return rec;
}

/// Deterministic scan: fixed point list, records independent, per-point
/// errors recorded in place. MWL_THREADS >= 2 fans points out over threads;
/// output order stays fixed by the point list.
inline std::vector<ScanRecord> grid_scan(const Immersion& im, const Box& region,
                                         const GridSpec& grid,
                                         const ScanOptions& opt = {}) {
  std::vector<Vec> pts = sample_points(region, grid);
  std::vector<ScanRecord> records(pts.size());
  const int threads = std::min<int>(probe_thread_count(),
                                    static_cast<int>(pts.size()) > 0 ? static_cast<int>(pts.size()) : 1);
  if (threads <= 1) {
    for (size_t i = 0; i < pts.size(); ++i)
      records[i] = scan_point(im, pts[i], opt);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&]() {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= pts.size()) return;
          records[i] = scan_point(im, pts[i], opt);
        }
      });
    for (auto& th : pool) th.join();
  }
  return records;
}

struct ScalarStat {
  double min = 0.0, max = 0.0, mean = 0.0, max_abs_dev = 0.0;
  int count = 0;
};

struct ProbeSummary {
  std::map<std::string, ScalarStat> scalars;
  int samples = 0;
  int certified_count = 0;
  int error_count = 0;
  uint64_t seed = 0;
  bool homogeneity_consistent = false;
};

namespace probe_detail {

inline ScalarStat make_stat(const std::vector<double>& xs) {
  ScalarStat s;
  s.count = static_cast<int>(xs.size());
  if (xs.empty()) return s;
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  double acc = 0.0;
  for (double x : xs) acc += x;
  s.mean = acc / xs.size();
  for (double x : xs) s.max_abs_dev = std::max(s.max_abs_dev, std::abs(x - s.mean));
  return s;
}

}  // namespace probe_detail

/// Constancy of the scalar Moebius invariants across random samples: a
/// necessary condition for Moebius homogeneity. Verdict compares each
/// scalar's spread against its tolerance class (jet-exact vs FD-derived).
inline ProbeSummary homogeneity_probe(const Immersion& im, int samples,
                                      uint64_t seed,
                                      const FieldDerivativeSpec& spec,
                                      double jet_tol = 1e-6,
                                      double fd_tol = 1e-3) {
  GridSpec g;
  g.random = true;
  g.n = samples;
  g.seed = seed;
  std::vector<Vec> pts = sample_points(im.sample_region, g);

  std::map<std::string, std::vector<double>> series;
  ProbeSummary out;
  out.samples = samples;
  out.seed = seed;
  for (const Vec& u : pts) {
    try {
      MoebiusInvariants inv = invariant_scalars(im, u, spec);
      series["gap"].push_back(inv.gap);
      series["b_norm2"].push_back(inv.B_norm2);
      if (inv.phi_norm2) series["phi_norm2"].push_back(*inv.phi_norm2);
      if (inv.kappa) series["kappa"].push_back(*inv.kappa);
      if (inv.trA) series["tr_a"].push_back(*inv.trA);
      if (inv.A_eigenvalues)
        for (int k = 0; k < inv.A_eigenvalues->size(); ++k)
          series["a_eig_" + std::to_string(k)].push_back((*inv.A_eigenvalues)[k]);
      if (inv.mu0) ++out.certified_count;
    } catch (const Error&) {
      ++out.error_count;
    }
  }
  for (const auto& [name, xs] : series)
    out.scalars[name] = probe_detail::make_stat(xs);

  auto tol_for = [&](const std::string& name) {
    return (name == "gap" || name == "b_norm2") ? jet_tol : fd_tol;
  };
  bool ok = out.error_count == 0 && !series.empty();
  for (const auto& [name, st] : out.scalars)
    if (st.max_abs_dev > tol_for(name)) ok = false;
  out.homogeneity_consistent = ok;
  return out;
}

/// Max per-scalar discrepancy of invariant_scalars between f and T.f at
/// matched chart points. Points whose transform lands near infinity are
/// resampled (up to 100 draws).
inline std::map<std::string, double> invariance_check(
    const Immersion& im, const LorentzMatrix& t, int samples, uint64_t seed,
    const FieldDerivativeSpec& spec, const InvariantOptions& opt = {}) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Box& region = im.sample_region;
  std::map<std::string, double> disc;
  auto bump = [&disc](const std::string& key, double v) {
    auto it = disc.find(key);
    if (it == disc.end() || v > it->second) disc[key] = v;
  };

  int accepted = 0, attempts = 0;
  while (accepted < samples) {
    if (++attempts > 100 * samples + 100)
      throw Error("invariance_check: resampling exhausted");
    Vec u(region.dim());
    for (int a = 0; a < region.dim(); ++a)
      u[a] = region.lo[a] + (region.hi[a] - region.lo[a]) * unif(rng);
    try {
      Immersion euclid = euclideanize_at(im, u);
      MoebiusInvariants s1 = invariant_scalars(euclid, u, spec, opt);
      Immersion moved = transform_immersion(t, euclid);
      MoebiusInvariants s2 = invariant_scalars(moved, u, spec, opt);
      bump("gap", std::abs(s1.gap - s2.gap));
      bump("b_norm2", std::abs(s1.B_norm2 - s2.B_norm2));
      if (s1.phi_norm2 && s2.phi_norm2)
        bump("phi_norm2", std::abs(*s1.phi_norm2 - *s2.phi_norm2));
      if (s1.kappa && s2.kappa) bump("kappa", std::abs(*s1.kappa - *s2.kappa));
      if (s1.trA && s2.trA) bump("tr_a", std::abs(*s1.trA - *s2.trA));
      if (s1.A_eigenvalues && s2.A_eigenvalues)
        bump("a_eigenvalues", (*s1.A_eigenvalues - *s2.A_eigenvalues)
                                  .cwiseAbs()
                                  .maxCoeff());
      ++accepted;
    } catch (const InfinityError&) {
      continue;  // transform sent the point (or its stencil) to infinity
    } catch (const PoleError&) {
      continue;
    }
  }
  return disc;
}

}  // namespace mwl
