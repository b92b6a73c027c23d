#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "roughhj/signal.hpp"

using namespace roughhj;

namespace {

// Independent oracle for the partition bound: enumerates every subset of the
// interior knots directly.
double bound_oracle(const DrivingPath<double>& p, double R) {
  const auto& v = p.values();
  const int interior = static_cast<int>(v.size()) - 2;
  REQUIRE(interior <= 20);
  double best = -1e300;
  for (unsigned long mask = 0; mask < (1ul << interior); ++mask) {
    std::vector<double> sel;
    sel.push_back(v(0));
    for (int i = 0; i < interior; ++i)
      if (mask & (1ul << i)) sel.push_back(v(i + 1));
    sel.push_back(v(v.size() - 1));
    double sum = 0;
    for (std::size_t i = 1; i < sel.size(); ++i) sum += std::abs(sel[i] - sel[i - 1]);
    const double n = static_cast<double>(sel.size() - 1);
    best = std::max(best, (sum - R) / n);
  }
  return clamp01(best);
}

DrivingPath<double> random_path(std::mt19937& gen, int max_knots = 9) {
  std::uniform_int_distribution<int> nk(3, max_knots);
  std::uniform_real_distribution<double> val(-2.0, 2.0), dt(0.1, 1.0);
  const int n = nk(gen);
  std::vector<std::pair<double, double>> knots;
  double t = 0;
  for (int i = 0; i < n; ++i) {
    knots.emplace_back(t, val(gen));
    t += dt(gen);
  }
  knots.front().second = 0.0;
  return DrivingPath<double>::from_knots(knots);
}

}  // namespace

TEST_CASE("path construction validates invariants") {
  CHECK_THROWS_AS(DrivingPath<double>::from_knots({{0, 0}}), ConfigError);
  CHECK_THROWS_AS(DrivingPath<double>::from_knots({{0.5, 0}, {1, 1}}), ConfigError);
  CHECK_THROWS_AS(DrivingPath<double>::from_knots({{0, 0}, {0, 1}}), ConfigError);
  CHECK_THROWS_AS(DrivingPath<double>::from_knots({{0, 0}, {1, std::nan("")}}), ConfigError);
}

TEST_CASE("eval interpolates linearly and is exact at knots") {
  const auto p = DrivingPath<double>::from_knots({{0, 0}, {1, 1}});
  CHECK(p(0.5) == doctest::Approx(0.5));
  CHECK(p(1.0) == 1.0);
  const auto c = DrivingPath<double>::from_knots({{0, 0}, {2, 0}});
  CHECK(c(1.3) == 0.0);
  CHECK_THROWS_AS(p(-0.1), DomainError);
  CHECK_THROWS_AS(p(1.1), DomainError);
}

TEST_CASE("total variation") {
  CHECK(total_variation(zigzag(1.0, 4, 1.0)) == doctest::Approx(4.0));
  CHECK(total_variation(DrivingPath<double>::from_knots({{0, 0}, {2, 0}})) == 0.0);
  const auto walk = sample_brownian<double>(7, 50, 2.0, 0.3);
  const double h = 0.3 * std::sqrt(2.0 / 50);
  CHECK(total_variation(walk) == doctest::Approx(50 * h));
}

TEST_CASE("oscillation") {
  CHECK(oscillation(zigzag(1.0, 4, 1.0), 1.0) == doctest::Approx(1.0));
  CHECK(oscillation(DrivingPath<double>::from_knots({{0, 0}, {2, 0}}), 1.7) == 0.0);
  const auto p = DrivingPath<double>::from_knots({{0, 0}, {1, 2}, {2, -1}});
  CHECK(p(2.0) == -1.0);
  CHECK(oscillation(p, 2.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(oscillation(p, 2.5), DomainError);
  // nondecreasing in t, bounded by the total variation
  double prev = 0;
  for (double t = 0; t <= 2.0; t += 0.1) {
    const double o = oscillation(p, t);
    CHECK(o >= prev - 1e-15);
    CHECK(o <= total_variation(p) + 1e-15);
    prev = o;
  }
}

TEST_CASE("monotone decomposition") {
  const auto segs = monotone_decomposition(DrivingPath<double>::from_knots({{0, 0}, {1, 1}, {2, 0.5}}));
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].sign == 1);
  CHECK(segs[0].delta == doctest::Approx(1.0));
  CHECK(segs[0].t_start == 0.0);
  CHECK(segs[0].t_end == 1.0);
  CHECK(segs[1].sign == -1);
  CHECK(segs[1].delta == doctest::Approx(-0.5));

  CHECK(monotone_decomposition(DrivingPath<double>::from_knots({{0, 0}, {2, 0}})).empty());

  const auto zz = monotone_decomposition(zigzag(1.0, 4, 1.0));
  REQUIRE(zz.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(zz[i].delta) == doctest::Approx(1.0));
    CHECK(zz[i].sign == (i % 2 == 0 ? 1 : -1));
  }

  // same-sign runs merge across interior knots; flats split them
  const auto merged =
      monotone_decomposition(DrivingPath<double>::from_knots({{0, 0}, {1, 0.5}, {2, 1}}));
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].delta == doctest::Approx(1.0));
  const auto split = monotone_decomposition(
      DrivingPath<double>::from_knots({{0, 0}, {1, 1}, {2, 1}, {3, 2}}));
  REQUIRE(split.size() == 2);
}

TEST_CASE("zigzag constructor") {
  const auto z = zigzag(1.0, 4, 1.0);
  REQUIRE(z.knot_count() == 5);
  for (Index i = 0; i < 5; ++i) CHECK(z.values()(i) == (i % 2 == 1 ? 1.0 : 0.0));
  CHECK(total_variation(zigzag(0.5, 1, 1.0)) == doctest::Approx(0.5));
  CHECK(total_variation(zigzag(2.0, 3, 3.0)) == doctest::Approx(6.0));
  CHECK_THROWS_AS(zigzag(-1.0, 4, 1.0), ConfigError);
  CHECK_THROWS_AS(zigzag(1.0, 0, 1.0), ConfigError);
}

TEST_CASE("brownian sampler is reproducible") {
  CHECK(sample_brownian<double>(3, 1, 1.0, 1.0).knot_count() == 2);
  const auto a = sample_brownian<double>(42, 100, 1.0, 1.0);
  const auto b = sample_brownian<double>(42, 100, 1.0, 1.0);
  CHECK((a.values() == b.values()).all());
  CHECK((a.times() == b.times()).all());
  const auto flat = sample_brownian<double>(42, 100, 1.0, 0.0);
  CHECK(total_variation(flat) == 0.0);
}

TEST_CASE("time reversal follows eta(t) = xi(T) - xi(T - t)") {
  const auto same = time_reverse(DrivingPath<double>::from_knots({{0, 0}, {1, 1}}));
  CHECK(same.values()(0) == 0.0);
  CHECK(same.values()(1) == 1.0);

  const auto upflat = time_reverse(DrivingPath<double>::from_knots({{0, 0}, {1, 1}, {2, 1}}));
  CHECK(upflat.values()(0) == 0.0);
  CHECK(upflat.values()(1) == doctest::Approx(0.0));
  CHECK(upflat.values()(2) == doctest::Approx(1.0));

  // The zigzag is palindromic in time, so the reversal negates its values:
  // eta(t) = xi(T) - xi(T - t) = 0 - xi(t).
  const auto rz = time_reverse(zigzag(1.0, 4, 1.0));
  REQUIRE(rz.knot_count() == 5);
  for (Index i = 0; i < 5; ++i) CHECK(rz.values()(i) == doctest::Approx(i % 2 == 1 ? -1.0 : 0.0));

  std::mt19937 gen(11);
  for (int it = 0; it < 25; ++it) {
    const auto p = random_path(gen);
    const auto r = time_reverse(p);
    CHECK(r.values()(0) == 0.0);
    CHECK(total_variation(r) == doctest::Approx(total_variation(p)).epsilon(1e-12));
    // derivative relation eta'(t) = xi'(T - t), probed between knots
    const double T = p.horizon();
    std::uniform_real_distribution<double> ts(1e-6, T - 1e-6);
    for (int k = 0; k < 10; ++k) {
      const double t = ts(gen), h = 1e-7;
      if (t + h > T || t - h < 0) continue;
      const double deta = (r(t + h) - r(t - h)) / (2 * h);
      const double dxi = (p(T - t + h) - p(T - t - h)) / (2 * h);
      CHECK(deta == doctest::Approx(dxi).epsilon(1e-4));
    }
  }
}

TEST_CASE("truncate restricts the path") {
  const auto p = zigzag(1.0, 4, 1.0);
  const auto q = truncate(p, 0.5);
  CHECK(q.horizon() == 0.5);
  CHECK(total_variation(q) == doctest::Approx(2.0));
  CHECK(q(0.25) == doctest::Approx(p(0.25)));
  CHECK_THROWS_AS(truncate(p, 1.5), DomainError);
}

TEST_CASE("partition bound on reference paths") {
  CHECK(partition_bound(zigzag(1.0, 4, 1.0), 1.0) == doctest::Approx(0.75));
  CHECK(partition_bound(zigzag(1.0, 2, 1.0), 0.0) == doctest::Approx(1.0));
  // total variation below R gives zero
  CHECK(partition_bound(zigzag(0.5, 1, 1.0), 2.0) == 0.0);
  CHECK(partition_bound(DrivingPath<double>::from_knots({{0, 0}, {1, 0}}), 0.5) == 0.0);
  CHECK_THROWS_AS(partition_bound(zigzag(1.0, 2, 1.0), -1.0), DomainError);
}

TEST_CASE("partition bound matches the subset-enumeration oracle") {
  std::mt19937 gen(2024);
  for (int it = 0; it < 60; ++it) {
    const auto p = random_path(gen);
    std::uniform_real_distribution<double> rr(0.0, 1.2 * total_variation(p) + 0.1);
    const double R = rr(gen);
    CHECK(partition_bound(p, R) == doctest::Approx(bound_oracle(p, R)).epsilon(1e-12));
  }
}

TEST_CASE("midpoint refinement never changes the bound on piecewise-linear paths") {
  std::mt19937 gen(404);
  for (int it = 0; it < 30; ++it) {
    const auto p = random_path(gen);
    PartitionBoundOptions with_mid;
    with_mid.refine_midpoints = true;
    for (double R : {0.0, 0.4, 1.1})
      CHECK(partition_bound(p, R, with_mid) == doctest::Approx(partition_bound(p, R)).epsilon(1e-12));
  }
}

TEST_CASE("partition bound is monotone in R and within [0, 1]") {
  std::mt19937 gen(5);
  for (int it = 0; it < 30; ++it) {
    const auto p = random_path(gen);
    double prev = 2.0;
    for (double R = 0; R <= total_variation(p) + 0.5; R += 0.25) {
      const double b = partition_bound(p, R);
      CHECK(b >= 0.0);
      CHECK(b <= 1.0);
      CHECK(b <= prev + 1e-15);
      if (total_variation(p) <= R) CHECK(b == 0.0);
      prev = b;
    }
  }
}

TEST_CASE("signal invariants") {
  std::mt19937 gen(99);
  for (int it = 0; it < 50; ++it) {
    const auto p = random_path(gen);
    const double tv = total_variation(p);
    CHECK(tv >= std::abs(p(p.horizon()) - p(0.0)) - 1e-15);
    double sum = 0;
    for (const auto& s : monotone_decomposition(p)) sum += std::abs(s.delta);
    CHECK(sum == doctest::Approx(tv).epsilon(1e-12));
  }
}

TEST_CASE("refinement invariance: subdividing a linear piece changes nothing") {
  std::mt19937 gen(7);
  for (int it = 0; it < 40; ++it) {
    const auto p = random_path(gen, 7);
    // insert the midpoint of a random piece
    std::uniform_int_distribution<int> pick(0, static_cast<int>(p.knot_count()) - 2);
    const int piece = pick(gen);
    std::vector<std::pair<double, double>> knots;
    for (Index i = 0; i < p.knot_count(); ++i) {
      knots.emplace_back(p.times()(i), p.values()(i));
      if (i == piece)
        knots.emplace_back((p.times()(i) + p.times()(i + 1)) / 2,
                           (p.values()(i) + p.values()(i + 1)) / 2);
    }
    const auto q = DrivingPath<double>::from_knots(knots);

    CHECK(total_variation(q) == doctest::Approx(total_variation(p)).epsilon(1e-12));
    std::uniform_real_distribution<double> ts(0.0, p.horizon());
    for (int k = 0; k < 8; ++k) {
      const double t = ts(gen);
      CHECK(q(t) == doctest::Approx(p(t)).epsilon(1e-12));
      CHECK(oscillation(q, t) == doctest::Approx(oscillation(p, t)).epsilon(1e-12));
    }
    const auto sp = monotone_decomposition(p), sq = monotone_decomposition(q);
    REQUIRE(sp.size() == sq.size());
    for (std::size_t i = 0; i < sp.size(); ++i) {
      CHECK(sq[i].t_start == doctest::Approx(sp[i].t_start));
      CHECK(sq[i].t_end == doctest::Approx(sp[i].t_end));
      CHECK(sq[i].delta == doctest::Approx(sp[i].delta).epsilon(1e-12));
    }
    for (double R : {0.0, 0.3, 1.0})
      CHECK(partition_bound(q, R) == doctest::Approx(partition_bound(p, R)).epsilon(1e-12));
  }
}

TEST_CASE("partition validation") {
  ArrayX<double> good(3);
  good << 0.0, 0.5, 1.0;
  CHECK(Partition<double>(good).increments() == 2);
  ArrayX<double> bad(3);
  bad << 0.1, 0.5, 1.0;
  CHECK_THROWS_AS((void)Partition<double>(bad), ConfigError);
  ArrayX<double> unsorted(3);
  unsorted << 0.0, 0.7, 0.5;
  CHECK_THROWS_AS((void)Partition<double>(unsorted), ConfigError);
}

TEST_CASE("float instantiation compiles and agrees coarsely") {
  const auto z = zigzag(1.0f, 4, 1.0f);
  CHECK(total_variation(z) == doctest::Approx(4.0f));
  CHECK(partition_bound(z, 1.0f) == doctest::Approx(0.75f));
}
