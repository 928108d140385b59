#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bgk/geometry.hpp"
#include "bgk/rng.hpp"

using namespace bgk;

namespace {

StarDomain disk(double r, double cb = 1.0) {
  return make_ball_domain({Vec(), r}, {Vec(), cb}, 2);
}

}  // namespace

TEST_SUITE_BEGIN("geometry");

TEST_CASE("ball membership") {
  StarDomain d = disk(2.0);
  CHECK(contains(d, Vec(0, 0)));
  CHECK_FALSE(contains(d, Vec(3, 0)));
  CHECK(contains(d, Vec(1.9, 0)));
}

TEST_CASE("box membership") {
  StarDomain d = make_box_domain(Vec(-1, -1), Vec(1, 1), {Vec(), 0.5}, 2);
  CHECK(contains(d, Vec(0.5, 0.99)));
  CHECK_FALSE(contains(d, Vec(0.5, 1.01)));
}

TEST_CASE("diameter closed forms") {
  CHECK(diameter(disk(2.0)) == doctest::Approx(4.0));
  StarDomain box = make_box_domain(Vec(0, 0), Vec(3, 4), {Vec(1.5, 2), 0.5}, 2);
  CHECK(diameter(box) == doctest::Approx(5.0));
}

TEST_CASE("radial diameter against dense boundary-pair oracle") {
  // r(theta) = 1 + 0.3 cos(theta): max boundary distance realized near the
  // horizontal axis; dense sampling oracle at 10^5 pairs
  auto rf = [](const Vec& u) { return 1.0 + 0.3 * u[0]; };  // cos(theta) = u_x
  StarDomain d = make_radial_domain(Vec(), rf, {Vec(), 0.4}, 2);

  double best = 0.0;
  const int m = 448;  // ~1e5 pairs
  for (int i = 0; i < m; ++i) {
    double a = 2.0 * M_PI * i / m;
    Vec pa = Vec(std::cos(a), std::sin(a)) * (1.0 + 0.3 * std::cos(a));
    for (int j = i + 1; j < m; ++j) {
      double b = 2.0 * M_PI * j / m;
      Vec pb = Vec(std::cos(b), std::sin(b)) * (1.0 + 0.3 * std::cos(b));
      best = std::max(best, (pa - pb).norm());
    }
  }
  CHECK(diameter(d) == doctest::Approx(best).epsilon(1e-3));
}

TEST_CASE("ray exits") {
  StarDomain d = disk(2.0);
  CHECK(ray_exit(d, Vec(0, 0), Vec(1, 0)) == doctest::Approx(2.0));
  CHECK(ray_exit(d, Vec(1, 0), Vec(1, 0)) == doctest::Approx(1.0));

  StarDomain box = make_box_domain(Vec(-1, -1), Vec(1, 1), {Vec(), 0.5}, 2);
  double s = 1.0 / std::sqrt(2.0);
  CHECK(ray_exit(box, Vec(0, 0), Vec(s, s)) == doctest::Approx(std::sqrt(2.0)));

  CHECK_THROWS_AS(ray_exit(d, Vec(5, 5), Vec(1, 0)), std::invalid_argument);
}

TEST_CASE("ray exit brackets the membership flip") {
  // exit property on analytic shapes: inside just before, outside just after
  StarDomain shapes[2] = {disk(2.0), make_box_domain(Vec(-1, -2), Vec(2, 1), {Vec(0.2, -0.3), 0.3}, 2)};
  for (const StarDomain& d : shapes) {
    double delta = 1e-6 * diameter(d);
    std::uint64_t idx = 9;
    for (int k = 0; k < 50; ++k) {
      Vec o = halton_in_ball(idx, d.center_ball.center, d.center_ball.radius, 2);
      Vec u = halton_direction(idx + 1, 2);
      idx += 2;
      double t = ray_exit(d, o, u);
      CHECK(contains(d, o + (t - delta) * u));
      CHECK_FALSE(contains(d, o + (t + delta) * u));
    }
  }
}

TEST_CASE("radial ray exit by bisection") {
  auto rf = [](const Vec& u) { return 1.0 + 0.3 * u[0]; };
  StarDomain d = make_radial_domain(Vec(), rf, {Vec(), 0.4}, 2);
  double t = ray_exit(d, Vec(0, 0), Vec(1, 0));
  CHECK(t == doctest::Approx(1.3).epsilon(1e-8));
  double delta = 1e-6 * diameter(d);
  Vec u = Vec(std::cos(1.1), std::sin(1.1));
  double t2 = ray_exit(d, Vec(0.1, 0.0), u);
  CHECK(contains(d, Vec(0.1, 0.0) + (t2 - delta) * u));
  CHECK_FALSE(contains(d, Vec(0.1, 0.0) + (t2 + delta) * u));
}

TEST_CASE("star gate accepts convex domains") {
  CHECK(verify_star_shaped(disk(2.0), {Vec(), 1.0}, 10000).ok);
  StarDomain box = make_box_domain(Vec(-2, -2), Vec(2, 2), {Vec(), 1.0}, 2);
  CHECK(verify_star_shaped(box, {Vec(), 1.0}, 10000).ok);
}

TEST_CASE("star gate rejects a spiked radial shape") {
  // one narrow spike: segments from the spike tip to off-axis ball points
  // leave the domain
  auto rf = [](const Vec& u) {
    double theta = std::atan2(u[1], u[0]);
    return 0.2 + std::exp(-200.0 * theta * theta);
  };
  StarDomain d = make_radial_domain(Vec(), rf, {Vec(), 0.15}, 2);
  StarReport rep = verify_star_shaped(d, {Vec(), 0.15}, 20000);
  CHECK_FALSE(rep.ok);
  // the witness pair really is a violation
  bool violated = false;
  for (int j = 0; j < 32; ++j) {
    Vec p = rep.witness_y + (j / 31.0) * (rep.witness_z - rep.witness_y);
    if (!contains(d, p)) violated = true;
  }
  CHECK(violated);
}

TEST_CASE("segment spot check from interior points to the center ball") {
  StarDomain d = disk(2.0);
  std::uint64_t idx = 100;
  for (int k = 0; k < 200; ++k) {
    Vec x = halton_in_box(idx, Vec(-2, -2), Vec(2, 2), 2);
    ++idx;
    if (!contains(d, x)) continue;
    for (int j = 0; j < 32; ++j) {
      Vec p = x + (j / 31.0) * (d.center_ball.center - x);
      CHECK(contains(d, p));
    }
  }
}

TEST_CASE("diameter dominates the center ball") {
  StarDomain d = disk(2.0, 0.7);
  CHECK(diameter(d) >= 2.0 * d.center_ball.radius);
}

TEST_CASE("union domain wiring") {
  StarDomain a = make_box_domain(Vec(-2, -2), Vec(0.5, 0.5), {Vec(-1, -1), 0.4}, 2);
  StarDomain b = make_box_domain(Vec(-0.5, -0.5), Vec(2, 2), {Vec(1, 1), 0.4}, 2);
  UnionDomain::Overlap ov{0, {Vec(0, 0), 0.4}};
  UnionDomain u = make_union_domain({a, b}, {ov});
  CHECK(contains(u, Vec(-1.5, -1.5)));
  CHECK(contains(u, Vec(1.5, 1.5)));
  CHECK_FALSE(contains(u, Vec(-1.5, 1.5)));

  // witness ball outside the overlap is rejected
  UnionDomain::Overlap bad{0, {Vec(1.8, 1.8), 0.4}};
  CHECK_THROWS_AS(make_union_domain({a, b}, {bad}), std::invalid_argument);
}

TEST_CASE("normalization maps shapes and diameters") {
  StarDomain d = make_ball_domain({Vec(1, 2), 4.0}, {Vec(1, 2), 2.0}, 2);
  StarDomain z = normalize_domain(d, Vec(1, 2), 2.0);
  CHECK(z.ball_radius == doctest::Approx(2.0));
  CHECK(diameter(z) == doctest::Approx(4.0));
  CHECK(z.center_ball.radius == doctest::Approx(1.0));
  CHECK(contains(z, Vec(1.9, 0)));
  CHECK_FALSE(contains(z, Vec(2.1, 0)));
}

TEST_CASE("dimension mismatch is rejected") {
  CHECK_THROWS_AS(make_ball_domain({Vec(), 1.0}, {Vec(), 0.5}, 5), std::invalid_argument);
  CHECK_THROWS_AS(make_ball_domain({Vec(), -1.0}, {Vec(), 0.5}, 2), std::invalid_argument);
}

TEST_SUITE_END();
