#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "roughhj/solver.hpp"

using namespace roughhj;

namespace {

GridFunction<double> random_function(std::mt19937& gen, const Grid<double>& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Index n = g.nodes();
  GridFunction<double> f{g, ArrayXX<double>(n, g.dim == 2 ? n : 1)};
  for (Index j = 0; j < f.values.cols(); ++j)
    for (Index i = 0; i < n; ++i) f.values(i, j) = u(gen);
  return f;
}

double origin(const GridFunction<double>& f) {
  const Index c = f.grid.center();
  return f.grid.dim == 1 ? f.values(c, 0) : f.values(c, c);
}

}  // namespace

TEST_CASE("initial conditions") {
  Grid<double> g{2, 2.5, 0.25};
  const auto u0 = bump_ic(g, 1.0);
  CHECK(u0.at(0.0, 0.0) == 0.0);
  CHECK(u0.at(1.0, 1.0) == doctest::Approx(1.0));
  CHECK(u0.at(0.5, 2.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(bump_ic(g, 3.0), ConfigError);
  CHECK_THROWS_AS(bump_ic(Grid<double>{1, 2.0, 0.25}, 1.0), ConfigError);

  CHECK(theta(0.0, 0.0, 1.0) == 0.0);
  CHECK(theta(4.0, 4.0, 1.0) == 1.0);
  CHECK(theta(0.0, 0.0, 1.0) == 0.0);
  CHECK(theta(0.0, 5.0, 1.0) == 0.0);

  const auto cone = cone_ic(g, 3.0, 2.0, 1.0);
  CHECK(cone.at(0.0, 0.0) == 3.0);
  CHECK(cone.at(1.0, 1.0) == 3.0);  // inside B(2)
  CHECK(cone.at(2.5, 0.0) == doctest::Approx(2.5));
}

TEST_CASE("constant data is a fixed point of both engines") {
  const auto path = zigzag(0.4, 2, 1.0);
  for (Engine e : {Engine::Morphological, Engine::LaxFriedrichs}) {
    SolveConfig<double> cfg;
    cfg.engine = e;
    cfg.cfl = 0.4;
    cfg.substeps_per_unit_variation = 8;
    const Grid<double> g2{2, e == Engine::Morphological ? 1.5 : 2.4, 0.1};
    const auto f = GridFunction<double>::constant(g2, 5.0);
    const auto rep = evolve(f, path, h_saddle<double>(), cfg);
    CHECK((rep.final.values == 5.0).all());
  }
  Grid<double> g1{1, 2.0, 0.1};
  SolveConfig<double> cfg1;
  const auto f1 = GridFunction<double>::constant(g1, 5.0);
  const auto rep1 = evolve(f1, DrivingPath<double>::from_knots({{0, 0}, {1, 0.5}}),
                           h_abs_1d<double>(), cfg1);
  CHECK((rep1.final.values == 5.0).all());
}

TEST_CASE("|x - y| is a per-segment fixed point of the erode-first splitting") {
  Grid<double> g{2, 1.6, 0.05};
  const auto f = abs_diff_ic(g);
  MonotoneSegment<double> up{0.0, 1.0, 1.0, 1};
  SolveConfig<double> cfg;
  cfg.substeps_per_unit_variation = 16;
  const auto out = step_segment(f, up, h_saddle<double>(), cfg);
  // unchanged at nodes farther than |delta| + dx from the boundary
  const double inner = g.half_width - 1.0 - g.dx;
  const Index c = g.center();
  const Index k = static_cast<Index>(inner / g.dx);
  double dev = 0;
  for (Index j = c - k; j <= c + k; ++j)
    for (Index i = c - k; i <= c + k; ++i)
      dev = std::max(dev, std::abs(out.values(i, j) - f.values(i, j)));
  CHECK(dev <= 1e-12);
}

TEST_CASE("affine data moves at the exact speed under the difference scheme") {
  Grid<double> g{2, 2.0, 0.1};
  const auto f = GridFunction<double>::sample(g, [](double x, double) { return x; });
  MonotoneSegment<double> up{0.0, 1.0, 0.5, 1};
  SolveConfig<double> cfg;
  cfg.engine = Engine::LaxFriedrichs;
  cfg.cfl = 0.5;  // 10 steps, numerical cone of radius 1.0
  const auto out = step_segment(f, up, h_saddle<double>(), cfg);
  // gradient (1, 0): H = 1, no dissipation; interior nodes gain exactly 0.5
  const Index c = g.center();
  for (Index off : {Index(-3), Index(0), Index(3)})
    CHECK(out.values(c + off, c) == doctest::Approx(f.values(c + off, c) + 0.5).epsilon(1e-10));
}

TEST_CASE("evolve validates grids, stability and engine support") {
  Grid<double> small{2, 0.5, 0.1};
  const auto path = zigzag(1.0, 2, 1.0);
  SolveConfig<double> cfg;
  CHECK_THROWS_WITH_AS(
      (void)evolve(GridFunction<double>::constant(small, 0.0), path, h_saddle<double>(), cfg),
      doctest::Contains("need at least"), ConfigError);

  SolveConfig<double> bad_cfl;
  bad_cfl.engine = Engine::LaxFriedrichs;
  bad_cfl.cfl = 0.9;  // above 1/sum(alpha) = 0.5
  Grid<double> g{2, 1.0, 0.1};
  CHECK_THROWS_AS(
      (void)evolve(GridFunction<double>::constant(g, 0.0),
                   DrivingPath<double>::from_knots({{0, 0}, {1, 0.1}}), h_saddle<double>(), bad_cfl),
      ConfigError);

  HamiltonianSpec<double> plain = h_saddle<double>();
  plain.convex_axis = plain.concave_axis = -1;  // no declared structure
  CHECK_THROWS_AS((void)evolve(GridFunction<double>::constant(g, 0.0),
                               DrivingPath<double>::from_knots({{0, 0}, {1, 0.1}}), plain, cfg),
                  ConfigError);
}

TEST_CASE("solve_value_at") {
  Grid<double> g{2, 2.5, 0.05};
  const auto path = zigzag(0.5, 1, 1.0);
  SolveConfig<double> cfg;
  cfg.substeps_per_unit_variation = 8;

  const auto c = GridFunction<double>::constant(g, 3.25);
  CHECK(solve_value_at(c, path, h_saddle<double>(), cfg, {{0.0, 0.0}})[0] == 3.25);

  const auto stat = abs_diff_ic(g);
  CHECK(std::abs(solve_value_at(stat, path, h_saddle<double>(), cfg, {{0.0, 0.0}})[0]) <= 1e-12);

  // dependence radius 0.5 does not reach the support of the bump for R = 2
  const auto u0 = bump_ic(g, 2.0);
  CHECK(solve_value_at(u0, path, h_saddle<double>(), cfg, {{0.0, 0.0}})[0] == 0.0);

  CHECK_THROWS_AS(solve_value_at(u0, path, h_saddle<double>(), cfg, {{2.4, 0.0}}), DomainError);
}

TEST_CASE("structural properties on random pairs") {
  std::mt19937 gen(77);
  const auto path = zigzag(0.4, 2, 1.0);
  Grid<double> gm{2, 1.2, 0.1};
  Grid<double> gl{2, 2.6, 0.1};

  for (Engine e : {Engine::Morphological, Engine::LaxFriedrichs}) {
    SolveConfig<double> cfg;
    cfg.engine = e;
    cfg.cfl = 0.4;
    cfg.substeps_per_unit_variation = 8;
    cfg.observation_radius = 0.2;
    const Grid<double>& g = e == Engine::Morphological ? gm : gl;
    for (int it = 0; it < 25; ++it) {
      const auto f = random_function(gen, g);
      auto gfun = random_function(gen, g);
      gfun.values = f.values + gfun.values.abs();  // f <= g pointwise

      const auto rf = evolve(f, path, h_saddle<double>(), cfg);
      const auto rg = evolve(gfun, path, h_saddle<double>(), cfg);

      // monotone: order is preserved everywhere
      CHECK(((rg.final.values - rf.final.values) >= -1e-12).all());

      // commutation with constants
      auto shifted = f;
      shifted.values += 3.7;
      const auto rs = evolve(shifted, path, h_saddle<double>(), cfg);
      CHECK((rs.final.values - rf.final.values - 3.7).abs().maxCoeff() <= 1e-12);

      // sup-norm contraction
      CHECK((rg.final.values - rf.final.values).abs().maxCoeff() <=
            (gfun.values - f.values).abs().maxCoeff() + 1e-12);
    }
  }
}

TEST_CASE("domain of dependence is exactly the reported radius") {
  std::mt19937 gen(88);
  const auto path = zigzag(0.3, 2, 1.0);
  const double rho = 0.3;
  for (Engine e : {Engine::Morphological, Engine::LaxFriedrichs}) {
    SolveConfig<double> cfg;
    cfg.engine = e;
    cfg.cfl = 0.4;
    cfg.substeps_per_unit_variation = 8;
    cfg.observation_radius = rho;
    const Grid<double> g{2, e == Engine::Morphological ? 1.2 : 2.2, 0.1};
    const auto f = random_function(gen, g);
    const double dep = dependence_radius(path, h_saddle<double>(), cfg, g.dx);

    auto masked = f;
    const Index n = g.nodes();
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i)
        if (std::max(std::abs(g.coord(i)), std::abs(g.coord(j))) > rho + dep)
          masked.values(i, j) = 0.0;

    const auto rf = evolve(f, path, h_saddle<double>(), cfg);
    const auto rm = evolve(masked, path, h_saddle<double>(), cfg);
    const Index k = static_cast<Index>(std::floor(rho / g.dx + 1e-9));
    const Index c = g.center();
    for (Index j = c - k; j <= c + k; ++j)
      for (Index i = c - k; i <= c + k; ++i)
        CHECK(rf.final.values(i, j) == rm.final.values(i, j));
  }
}

TEST_CASE("cross-engine agreement under joint refinement") {
  const auto path = zigzag(1.0, 2, 1.0);
  std::vector<double> diffs;
  int m = 8;
  for (double dx : {0.2, 0.1, 0.05}) {
    SolveConfig<double> cm;
    cm.substeps_per_unit_variation = m;
    SolveConfig<double> cl;
    cl.engine = Engine::LaxFriedrichs;
    cl.cfl = 0.4;
    const Grid<double> gm{2, 2.0 + dependence_radius(path, h_saddle<double>(), cm, dx) + 2 * dx, dx};
    const Grid<double> gl{2, 2.0 + dependence_radius(path, h_saddle<double>(), cl, dx) + 2 * dx, dx};
    const double vm = origin(evolve(bump_ic(gm, 1.0), path, h_saddle<double>(), cm).final);
    const double vl = origin(evolve(bump_ic(gl, 1.0), path, h_saddle<double>(), cl).final);
    diffs.push_back(std::abs(vm - vl));
    m *= 2;
  }
  CHECK(diffs[1] <= 0.8 * diffs[0] + 1e-12);
  CHECK(diffs[2] <= 0.8 * diffs[1] + 1e-12);
}

TEST_CASE("splitting error vanishes as the substep count doubles") {
  // On bump_ic data the interleaved compositions coincide exactly, so the
  // doubling differences are identically zero (the strongest contraction).
  const auto path = zigzag(1.0, 2, 1.0);
  const double dx = 0.05;
  std::vector<double> vals;
  for (int m : {2, 4, 8, 16}) {
    SolveConfig<double> cfg;
    cfg.substeps_per_unit_variation = m;
    const Grid<double> g{2, 2.0 + dependence_radius(path, h_saddle<double>(), cfg, dx) + 2 * dx, dx};
    const auto rep = evolve(bump_ic(g, 1.5), path, h_saddle<double>(), cfg);
    const Index c = g.center();
    const Index k = static_cast<Index>((g.half_width - rep.dependence_radius) / dx) - 1;
    double sup = 0;
    // track the whole trusted box, not just the origin
    for (Index j = c - k; j <= c + k; ++j)
      for (Index i = c - k; i <= c + k; ++i) sup = std::max(sup, rep.final.values(i, j));
    vals.push_back(origin(rep.final) + sup);
  }
  std::vector<double> diffs;
  for (std::size_t i = 1; i < vals.size(); ++i) diffs.push_back(std::abs(vals[i] - vals[i - 1]));
  for (std::size_t i = 1; i < diffs.size(); ++i) CHECK(diffs[i] <= 0.8 * diffs[i - 1] + 1e-12);
}

TEST_CASE("substep refinement saturates exactly at cell resolution") {
  // Generic data: interleaves with different substep counts genuinely differ,
  // but once m exceeds the per-segment cell count the cumulative-rounding
  // schedule emits the same 0/1-cell sequence, so results are bit-identical.
  Grid<double> g{2, 1.5, 0.05};
  std::mt19937 gen(5);
  const auto f = random_function(gen, g);
  MonotoneSegment<double> up{0.0, 1.0, 1.0, 1};  // 20 cells at dx = 0.05
  SolveConfig<double> coarse, at_cells, beyond;
  coarse.substeps_per_unit_variation = 4;
  at_cells.substeps_per_unit_variation = 20;
  beyond.substeps_per_unit_variation = 64;
  const auto u_coarse = step_segment(f, up, h_saddle<double>(), coarse);
  const auto u_cells = step_segment(f, up, h_saddle<double>(), at_cells);
  const auto u_beyond = step_segment(f, up, h_saddle<double>(), beyond);
  CHECK((u_coarse.values != u_cells.values).any());
  CHECK((u_cells.values == u_beyond.values).all());
}

TEST_CASE("the two axis operators do not commute") {
  // 2 x 2 counterexample, computed through the public window filters
  ArrayX<double> r0(2), r1(2);
  r0 << 0, 1;
  r1 << 1, 0;
  // dilate rows then erode columns vs erode columns then dilate rows
  ArrayXX<double> f(2, 2);
  f.row(0) = r0.transpose();
  f.row(1) = r1.transpose();

  const auto dilate_rows = [](const ArrayXX<double>& a) {
    ArrayXX<double> out = a;
    for (Index i = 0; i < a.rows(); ++i)
      out.row(i) = window_max(ArrayX<double>(a.row(i).transpose()), 1).transpose();
    return out;
  };
  const auto erode_cols = [](const ArrayXX<double>& a) {
    ArrayXX<double> out = a;
    for (Index j = 0; j < a.cols(); ++j) out.col(j) = window_min(ArrayX<double>(a.col(j)), 1);
    return out;
  };

  const ArrayXX<double> de = dilate_rows(erode_cols(f));
  const ArrayXX<double> ed = erode_cols(dilate_rows(f));
  CHECK((de != ed).any());
}

TEST_CASE("ordering flag changes the substep composition but both converge") {
  const auto path = zigzag(1.0, 1, 1.0);
  const double dx = 0.05;
  std::vector<double> gaps;
  for (int m : {4, 16, 64}) {
    SolveConfig<double> ce, cd;
    ce.substeps_per_unit_variation = m;
    cd.substeps_per_unit_variation = m;
    cd.ordering = SubstepOrdering::DilateFirst;
    const Grid<double> g{2, 1.0 + dependence_radius(path, h_saddle<double>(), ce, dx) + 2 * dx, dx};
    const auto u0 = bump_ic(g, 1.0);
    const double ve = origin(evolve(u0, path, h_saddle<double>(), ce).final);
    const double vd = origin(evolve(u0, path, h_saddle<double>(), cd).final);
    gaps.push_back(std::abs(ve - vd));
  }
  CHECK(gaps.back() <= gaps.front() + 1e-12);
}

TEST_CASE("custom Hamiltonians: pointwise fallback and per-axis speeds") {
  // no vectorized evaluator: the difference engine falls back to the
  // pointwise form; declared slopes (0.5, 0.25)
  HamiltonianSpec<double> slow;
  slow.dim = 2;
  slow.value = [](const VectorX<double>& p) {
    return 0.5 * std::abs(p(0)) - 0.25 * std::abs(p(1));
  };
  slow.lipschitz << 0.5, 0.25;
  slow.convex_axis = 0;
  slow.concave_axis = 1;
  slow.name = "half_saddle";

  Grid<double> g{2, 2.0, 0.1};
  const auto plane = GridFunction<double>::sample(g, [](double x, double) { return x; });
  MonotoneSegment<double> up{0.0, 1.0, 0.4, 1};
  SolveConfig<double> lf;
  lf.engine = Engine::LaxFriedrichs;
  lf.cfl = 1.0;  // within 1/sum(alpha) = 4/3
  const auto out = step_segment(plane, up, slow, lf);
  const Index c = g.center();
  // gradient (1, 0): du/ds = 0.5, total 0.4 * 0.5 = 0.2
  CHECK(out.values(c, c) == doctest::Approx(plane.values(c, c) + 0.2).epsilon(1e-10));

  // morphological engine honors the per-axis speeds: dilation radius
  // |delta| * alpha on the convex axis
  HamiltonianSpec<double> fast = h_saddle<double>();
  fast.value = [](const VectorX<double>& p) { return 2 * std::abs(p(0)) - std::abs(p(1)); };
  fast.lipschitz << 2.0, 1.0;
  const auto hat2d = GridFunction<double>::sample(
      g, [](double x, double) { return std::max(0.0, 1.0 - std::abs(x)); });
  MonotoneSegment<double> up2{0.0, 1.0, 0.5, 1};
  SolveConfig<double> mo;
  mo.substeps_per_unit_variation = 10;
  const auto grown = step_segment(hat2d, up2, fast, mo);
  // x-profile dilated by 0.5 * 2 = 1.0; flat in y so the erosion is inert
  CHECK(grown.values.col(c).maxCoeff() == doctest::Approx(1.0));
  CHECK(grown.at(1.5, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(grown.at(-1.8, 0.0) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("a flat driver leaves the data untouched") {
  const auto flat = DrivingPath<double>::from_knots({{0, 0}, {1, 0}});
  Grid<double> g{2, 1.0, 0.1};
  std::mt19937 gen(3);
  const auto f = random_function(gen, g);
  for (Engine e : {Engine::Morphological, Engine::LaxFriedrichs}) {
    SolveConfig<double> cfg;
    cfg.engine = e;
    const auto rep = evolve(f, flat, h_saddle<double>(), cfg);
    CHECK((rep.final.values == f.values).all());
    CHECK(rep.segments == 0);
    CHECK(rep.dependence_radius == 0.0);
  }
}

TEST_CASE("the solver templates instantiate for float") {
  Grid<float> g{2, 1.5f, 0.1f};
  const auto path = zigzag(0.4f, 2, 1.0f);
  SolveConfig<float> cfg;
  cfg.substeps_per_unit_variation = 8;
  const auto u0 = bump_ic(g, 0.5f);
  const auto rep = evolve(u0, path, h_saddle<float>(), cfg);
  CHECK(rep.segments == 2);
  const auto stat = evolve(abs_diff_ic(g), path, h_saddle<float>(), cfg);
  const auto u0s = abs_diff_ic(g);
  const Index c = g.center();
  const Index k = static_cast<Index>(stat.trusted_half_width / g.dx) - 1;
  float dev = 0;
  for (Index j = c - k; j <= c + k; ++j)
    for (Index i = c - k; i <= c + k; ++i)
      dev = std::max(dev, std::abs(stat.final.values(i, j) - u0s.values(i, j)));
  CHECK(dev <= 1e-5f);
}

TEST_CASE("evolve report bookkeeping") {
  const auto path = zigzag(0.5, 2, 1.0);
  SolveConfig<double> cfg;
  cfg.substeps_per_unit_variation = 4;
  const Grid<double> g{2, 1.6, 0.1};
  const auto rep = evolve(bump_ic(g, 0.5), path, h_saddle<double>(), cfg);
  CHECK(rep.segments == 2);
  CHECK(rep.segment_sup_changes.size() == 2);
  CHECK(rep.dependence_radius == doctest::Approx(1.0));
  CHECK(rep.trusted_half_width == doctest::Approx(g.half_width - rep.dependence_radius));
  CHECK(rep.dx == 0.1);
}
