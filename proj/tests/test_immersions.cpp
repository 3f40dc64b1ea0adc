#include <catch2/catch_amalgamated.hpp>

#include "mwl/ddvv.hpp"
#include "mwl/gallery.hpp"
#include "mwl/geometry.hpp"
#include "mwl/lorentz.hpp"
#include "mwl/metric_curvature.hpp"
#include "mwl/moebius.hpp"

#include "oracles.hpp"

using namespace mwl;
using Catch::Approx;

namespace {

std::vector<Immersion> sphere_members() {
  std::vector<Immersion> v;
  v.push_back(gallery_get("veronese_s4"));
  v.push_back(gallery_get("veronese_s2k", {{"k", "3"}}));
  v.push_back(gallery_get("clifford"));
  v.push_back(gallery_get("clifford", {{"r", "0.7071067811865476,0.7071067811865476"},
                                       {"theta", "0,1.5707963267948966"}}));
  v.push_back(gallery_get("hopf_veronese", {{"n", "2"}}));
  return v;
}

/// Clifford parameter set with sum r^2 = 1 and sum e^{2 i theta} r^2 = 0,
/// solved from random angles (resampled until the radii are positive).
CliffordParams random_minimal_clifford(Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, M_PI);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Vec theta(3);
    for (int i = 0; i < 3; ++i) theta[i] = unif(rng);
    bool distinct = true;
    for (int i = 0; i < 3 && distinct; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (std::abs(std::remainder(theta[i] - theta[j], M_PI)) < 0.15)
          distinct = false;
    if (!distinct) continue;
    Mat a(3, 3);
    for (int k = 0; k < 3; ++k) {
      a(0, k) = 1.0;
      a(1, k) = std::cos(2.0 * theta[k]);
      a(2, k) = std::sin(2.0 * theta[k]);
    }
    Vec b(3);
    b << 1.0, 0.0, 0.0;
    Vec r2 = a.fullPivLu().solve(b);
    if (r2.minCoeff() < 0.02) continue;
    return CliffordParams::make(r2.cwiseSqrt(), theta);
  }
  throw std::runtime_error("could not sample a minimal Clifford parameter set");
}

CliffordParams random_nonminimal_clifford(Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, M_PI);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Vec theta(3), r2(3);
    for (int i = 0; i < 3; ++i) theta[i] = unif(rng);
    bool distinct = true;
    for (int i = 0; i < 3 && distinct; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (std::abs(std::remainder(theta[i] - theta[j], M_PI)) < 0.15)
          distinct = false;
    if (!distinct) continue;
    for (int i = 0; i < 3; ++i) r2[i] = 0.1 + unif(rng);
    r2 /= r2.sum();
    CliffordParams p = CliffordParams::make(r2.cwiseSqrt(), theta);
    if (clifford_conditions(p).minimal_defect > 1e-2) return p;
  }
  throw std::runtime_error("could not sample a non-minimal Clifford set");
}

}  // namespace

TEST_CASE("sphere-valued gallery members stay on the unit sphere",
          "[immersions]") {
  std::mt19937_64 rng(101);
  for (const Immersion& im : sphere_members()) {
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      Vec u = oracle::random_point_in(im.sample_region.lo, im.sample_region.hi,
                                      rng);
      worst = std::max(worst, std::abs(im.value(u).norm() - 1.0));
    }
    INFO(im.name);
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("clifford at the origin lines up radii", "[immersions]") {
  Vec r(2), theta(2);
  r << std::sqrt(0.5), std::sqrt(0.5);
  theta << 0.0, M_PI / 2.0;
  Immersion im = clifford(CliffordParams::make(r, theta));
  Vec f = im.value(Vec::Zero(2));
  CHECK(f[0] == Approx(r[0]));
  CHECK(f[1] == Approx(0.0).margin(1e-15));
  CHECK(f[2] == Approx(r[1]));
  CHECK(f[3] == Approx(0.0).margin(1e-15));
}

TEST_CASE("clifford constructor rejects bad parameters", "[immersions]") {
  Vec r(2), theta(2);
  r << std::sqrt(0.5), std::sqrt(0.5);
  theta << 0.3, 0.3;
  CHECK_THROWS_AS(CliffordParams::make(r, theta), Error);  // equal mod pi
  theta << 0.3, 0.3 + M_PI;
  CHECK_THROWS_AS(CliffordParams::make(r, theta), Error);
  r << 1.0, 0.4;  // sum of squares far from 1
  theta << 0.0, 1.0;
  CHECK_THROWS_AS(CliffordParams::make(r, theta), Error);
  r << 1.0, -0.1;
  CHECK_THROWS_AS(CliffordParams::make(r, theta), Error);
}

TEST_CASE("clifford radii are normalized when nearly unit", "[immersions]") {
  Vec r(2), theta(2);
  const double eps = 1e-8;
  r << std::sqrt(0.5 + eps), std::sqrt(0.5);
  theta << 0.0, 1.0;
  CliffordParams p = CliffordParams::make(r, theta);
  CHECK(p.r.squaredNorm() == Approx(1.0).margin(1e-14));
}

TEST_CASE("clifford condition defects", "[immersions]") {
  // Equilateral: minimal and Wintgen ideal (third roots of unity).
  Vec r3 = Vec::Constant(3, 1.0 / std::sqrt(3.0));
  Vec t3(3);
  t3 << 0.0, M_PI / 3.0, 2.0 * M_PI / 3.0;
  CliffordDefects d = clifford_conditions(r3, t3);
  CHECK(d.unit_sum == Approx(0.0).margin(1e-12));
  CHECK(d.minimal_defect == Approx(0.0).margin(1e-12));
  CHECK(d.wintgen_defect == Approx(0.0).margin(1e-12));

  // S^3 torus: minimal, Wintgen defect exactly 1 (e^0 + e^{2 pi i} halved).
  Vec r2 = Vec::Constant(2, std::sqrt(0.5));
  Vec t2(2);
  t2 << 0.0, M_PI / 2.0;
  d = clifford_conditions(r2, t2);
  CHECK(d.unit_sum == Approx(0.0).margin(1e-12));
  CHECK(d.minimal_defect == Approx(0.0).margin(1e-12));
  CHECK(d.wintgen_defect == Approx(1.0).margin(1e-12));
}

TEST_CASE("minimality defect matches |H| across 10+10 parameter sets",
          "[immersions][oracle]") {
  Rng rng(505);
  Vec probe(2);
  probe << 0.37, -0.81;
  for (int k = 0; k < 10; ++k) {
    CliffordParams p = random_minimal_clifford(rng);
    Immersion im = clifford(p);
    FundamentalForms ff = fundamental_forms(im, probe);
    CHECK(ff.H.norm() < 1e-7);
  }
  for (int k = 0; k < 10; ++k) {
    CliffordParams p = random_nonminimal_clifford(rng);
    Immersion im = clifford(p);
    FundamentalForms ff = fundamental_forms(im, probe);
    CHECK(ff.H.norm() > 1e-4);
  }
}

TEST_CASE("veronese degree 2 is minimal with constant curvature 1/3",
          "[immersions]") {
  Immersion v = veronese_sphere(2);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    Vec u = oracle::random_point_in(v.sample_region.lo, v.sample_region.hi, rng);
    CHECK(std::abs(v.value(u).norm() - 1.0) < 1e-10);
    FundamentalForms ff = fundamental_forms(v, u);
    CHECK(ff.H.norm() < 1e-8);
  }
  MetricField metric = [&](const Vec& u) {
    return fundamental_forms(v, u).I;
  };
  FieldDerivativeSpec spec;
  for (int k = 0; k < 5; ++k) {
    Vec u = oracle::random_point_in(v.sample_region.lo, v.sample_region.hi, rng);
    CurvatureData cd = metric_curvature(metric, u, spec);
    CHECK(cd.scalar / 2.0 == Approx(1.0 / 3.0).margin(1e-6));
  }
}

TEST_CASE("veronese degree 3 sits on the sphere after quadrature",
          "[immersions]") {
  Immersion v = veronese_sphere(3);
  CHECK(v.ambient.coords() == 7);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 100; ++k) {
    Vec u = oracle::random_point_in(v.sample_region.lo, v.sample_region.hi, rng);
    CHECK(std::abs(v.value(u).norm() - 1.0) < 1e-8);
  }
  CHECK_THROWS_AS(veronese_sphere(4), Error);
}

TEST_CASE("hopf lift basics", "[immersions]") {
  Immersion h = hopf_veronese(2);
  Vec u = Vec::Zero(3);
  Vec f = h.value(u);
  CHECK(f[0] == Approx(1.0));
  for (int i = 1; i < 6; ++i) CHECK(f[i] == Approx(0.0).margin(1e-15));

  std::mt19937_64 rng(12);
  for (int k = 0; k < 100; ++k) {
    Vec p = oracle::random_point_in(h.sample_region.lo, h.sample_region.hi, rng);
    CHECK(std::abs(h.value(p).norm() - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(hopf_veronese(1), Error);
}

TEST_CASE("cone evaluator and first fundamental form", "[immersions]") {
  Immersion base = gallery_get("clifford");
  Immersion c = cone_over(base, 1);
  CHECK(c.chart_dim == 4);
  CHECK(c.ambient.coords() == 1 + base.ambient.coords());

  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    Vec u = oracle::random_point_in(c.sample_region.lo, c.sample_region.hi, rng);
    const double t = u[0];
    Vec ub = u.tail(2);
    Vec fc = c.value(u);
    Vec fb = base.value(ub);
    CHECK(fc[0] == Approx(u[1]));  // flat coordinate passes through
    for (int i = 0; i < fb.size(); ++i) CHECK(fc[1 + i] == Approx(t * fb[i]));

    // I = t^2 I_u + I_flat in block form.
    Mat big = c.jacobian(u).transpose() * c.jacobian(u);
    Mat small = base.jacobian(ub).transpose() * base.jacobian(ub);
    CHECK(big(0, 0) == Approx(1.0).margin(1e-12));   // |u|=1 radial direction
    CHECK(big(1, 1) == Approx(1.0).margin(1e-12));   // flat direction
    CHECK(std::abs(big(0, 1)) < 1e-12);
    CHECK(std::abs(big(0, 2)) < 1e-12);  // u . du = 0 on the sphere
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        CHECK(big(2 + a, 2 + b) == Approx(t * t * small(a, b)).margin(1e-12));
  }

  CHECK_THROWS_AS(cone_over(gallery_get("plane")), Error);
}

TEST_CASE("stereographic projection round trip", "[immersions]") {
  Vec south = Vec::Zero(5);
  south[4] = -1.0;
  CHECK(stereographic_project(south).norm() == Approx(0.0).margin(1e-15));

  std::mt19937_64 rng(77);
  for (int k = 0; k < 100; ++k) {
    Vec w = oracle::random_point_in(Vec::Constant(4, -2.0),
                                    Vec::Constant(4, 2.0), rng);
    Vec x = stereographic_inverse(w);
    CHECK(std::abs(x.norm() - 1.0) < 1e-12);
    CHECK((stereographic_project(x) - w).cwiseAbs().maxCoeff() < 1e-12);
  }

  Vec pole = Vec::Zero(5);
  pole[4] = 1.0 - 1e-8;
  CHECK_THROWS_AS(stereographic_project(pole), PoleError);
}

TEST_CASE("re-ambienting preserves the DDVV picture", "[immersions]") {
  std::mt19937_64 rng(55);

  // Wintgen member: metric-level gap vanishes in both ambients.
  Immersion v = gallery_get("veronese_s4");
  for (int k = 0; k < 10; ++k) {
    Vec u = oracle::random_point_in(v.sample_region.lo, v.sample_region.hi, rng);
    Immersion e = euclideanize_at(v, u);
    double gap_sphere =
        ddvv_report(shape_operators(fundamental_forms(v, u)), 1.0).gap;
    double gap_euclid =
        ddvv_report(shape_operators(fundamental_forms(e, u)), 0.0).gap;
    CHECK(std::abs(gap_sphere - gap_euclid) < 1e-8);
    CHECK(std::abs(gap_sphere) < 1e-9);
  }

  // Non-Wintgen member: the Moebius-normalized gap is what re-ambienting
  // preserves, independently of the pole.
  Immersion torus = gallery_get(
      "clifford", {{"r", "0.7071067811865476,0.7071067811865476"},
                   {"theta", "0,1.5707963267948966"}});
  for (int k = 0; k < 10; ++k) {
    Vec u = oracle::random_point_in(torus.sample_region.lo,
                                    torus.sample_region.hi, rng);
    Immersion e = euclideanize_at(torus, u);
    double gap_b = ddvv_report(moebius_B(e, u), 0.0).gap;
    Immersion e2 = euclideanize(torus, Vec::Unit(4, 1));
    double gap_b_other = ddvv_report(moebius_B(e2, u), 0.0).gap;
    CHECK(gap_b == Approx(gap_b_other).margin(1e-8));
    CHECK(gap_b == Approx(0.25).margin(1e-10));
  }
}

TEST_CASE("lorentz generators are lorentz and act correctly", "[immersions]") {
  const int n = 4;
  std::mt19937_64 rng(303);

  LorentzMatrix id = LorentzMatrix::identity(n);
  for (int k = 0; k < 20; ++k) {
    Vec x = oracle::random_point_in(Vec::Constant(n, -2.0),
                                    Vec::Constant(n, 2.0), rng);
    CHECK((apply_moebius(id, x) - x).cwiseAbs().maxCoeff() < 1e-15);
  }

  LorentzMatrix dil = lorentz_dilation(n, 1.75);
  CHECK(dil.lorentz_defect() < 1e-10);
  for (int k = 0; k < 20; ++k) {
    Vec x = oracle::random_point_in(Vec::Constant(n, -2.0),
                                    Vec::Constant(n, 2.0), rng);
    CHECK((apply_moebius(dil, x) - 1.75 * x).cwiseAbs().maxCoeff() < 1e-12);
  }

  LorentzMatrix inv = lorentz_inversion(n);
  CHECK(inv.lorentz_defect() < 1e-10);
  for (int k = 0; k < 20; ++k) {
    Vec x = oracle::random_point_in(Vec::Constant(n, 0.2),
                                    Vec::Constant(n, 2.0), rng);
    CHECK((apply_moebius(inv, x) - x / x.squaredNorm()).cwiseAbs().maxCoeff() <
          1e-12);
  }

  Vec b = Vec::LinSpaced(n, -0.5, 0.8);
  LorentzMatrix tr = lorentz_translation(b);
  CHECK(tr.lorentz_defect() < 1e-10);
  Vec x = Vec::Constant(n, 0.3);
  CHECK((apply_moebius(tr, x) - (x + b)).cwiseAbs().maxCoeff() < 1e-12);

  for (uint64_t seed = 1; seed <= 50; ++seed) {
    LorentzMatrix t = random_moebius(n, seed);
    CHECK(t.lorentz_defect() < 1e-10);
    CHECK(t.preserves_future());
  }

  // Inversion of the origin blows up.
  CHECK_THROWS_AS(apply_moebius(inv, Vec::Zero(n)), InfinityError);
}

TEST_CASE("transform_immersion matches pointwise moebius action",
          "[immersions]") {
  Immersion cone = gallery_get("cone_of", {{"base", "clifford"}});
  std::mt19937_64 rng(606);
  for (uint64_t seed : {3ull, 14ull, 159ull}) {
    LorentzMatrix t = random_moebius(cone.ambient.dim, seed);
    Immersion moved = transform_immersion(t, cone);
    for (int k = 0; k < 10; ++k) {
      Vec u = oracle::random_point_in(cone.sample_region.lo,
                                      cone.sample_region.hi, rng);
      Vec direct;
      try {
        direct = apply_moebius(t, cone.value(u));
      } catch (const InfinityError&) {
        continue;
      }
      CHECK((moved.value(u) - direct).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("cone-stereographic-moebius compositions preserve the gap",
          "[immersions]") {
  std::mt19937_64 rng(42);
  Immersion base = gallery_get("veronese_s4");
  Immersion cone = cone_over(base, 0);
  for (uint64_t seed : {5ull, 21ull}) {
    LorentzMatrix t = random_moebius(cone.ambient.dim, seed);
    Immersion moved = transform_immersion(t, cone);
    for (int k = 0; k < 10; ++k) {
      Vec u = oracle::random_point_in(cone.sample_region.lo,
                                      cone.sample_region.hi, rng);
      double g0 = ddvv_report(shape_operators(fundamental_forms(cone, u)), 0.0).gap;
      double g1 = 0.0;
      try {
        g1 = ddvv_report(shape_operators(fundamental_forms(moved, u)), 0.0).gap;
      } catch (const InfinityError&) {
        continue;
      }
      CHECK(std::abs(g0) < 1e-7);
      CHECK(std::abs(g1) < 1e-7);
    }
  }
}

TEST_CASE("gallery_get rejects unknown names and bad params", "[immersions]") {
  CHECK_THROWS_AS(gallery_get("nonexistent"), Error);
  CHECK_THROWS_AS(gallery_get("veronese_s2k", {{"k", "5"}}), Error);
  CHECK_THROWS_AS(gallery_get("hopf_veronese", {{"n", "1"}}), Error);
  CHECK_THROWS_AS(gallery_get("cone_of", {{"base", "plane"}}), Error);
  CHECK_THROWS_AS(gallery_get("cone_of"), Error);
  CHECK(gallery_list().size() >= 6);
}
