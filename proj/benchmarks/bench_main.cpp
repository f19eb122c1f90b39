#include <benchmark/benchmark.h>

#include <vector>

#include "anosov/parsets.hpp"
#include "anosov/pingpong.hpp"
#include "anosov/random.hpp"

namespace {

using namespace anosov;

std::vector<Point> make_points(int d, int n, double scale, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) {
    pts.push_back(Point::from_spd(sym_exp(scale * rng.traceless_symmetric(d))));
  }
  return pts;
}

void BM_delta_distance(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const std::vector<Point> pts = make_points(d, 64, 0.8, 7);
  std::size_t i = 0;
  for (auto _ : state) {
    const Point& x = pts[i % pts.size()];
    const Point& y = pts[(i + 1) % pts.size()];
    benchmark::DoNotOptimize(delta_distance(x, y));
    ++i;
  }
}
BENCHMARK(BM_delta_distance)->Arg(3)->Arg(5)->Arg(8);

void BM_geodesic_point(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const std::vector<Point> pts = make_points(d, 64, 0.8, 11);
  std::size_t i = 0;
  for (auto _ : state) {
    const Point& x = pts[i % pts.size()];
    const Point& y = pts[(i + 1) % pts.size()];
    benchmark::DoNotOptimize(geodesic_point(x, y, 0.37));
    ++i;
  }
}
BENCHMARK(BM_geodesic_point)->Arg(3)->Arg(5)->Arg(8);

void BM_xi_angle(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const FacePattern pattern = FacePattern::full(d);
  const XiMod xi = XiMod::standard(pattern);
  Rng rng(13);
  const Point x = Point::identity(d);
  std::vector<Flag> flags;
  while (flags.size() < 32) {
    try {
      flags.push_back(flag_of_segment(
          x, Point::from_spd(sym_exp(rng.traceless_symmetric(d))), pattern));
    } catch (const NotRegular&) {
    }
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        xi_angle(x, flags[i % flags.size()], flags[(i + 1) % flags.size()], xi));
    ++i;
  }
}
BENCHMARK(BM_xi_angle)->Arg(3)->Arg(5);

void BM_project_to_parallel_set(benchmark::State& state) {
  const int d = 3;
  const FacePattern pattern = FacePattern::full(d);
  Rng rng(17);
  const Point x = Point::identity(d);
  const Point y = Point::from_spd(sym_exp(rng.traceless_symmetric(d)));
  const Flag tp = flag_of_segment(x, y, pattern);
  const Flag tm = flag_of_segment(y, x, pattern);
  const ParallelSetFrame frame = parallel_set_of(tp, tm);
  const std::vector<Point> pts = make_points(d, 16, 0.5, 19);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_to_parallel_set(pts[i % pts.size()], frame));
    ++i;
  }
}
BENCHMARK(BM_project_to_parallel_set);

void BM_distance_to_diamond(benchmark::State& state) {
  const int d = 3;
  const FacePattern pattern = FacePattern::full(d);
  const XiMod xi = XiMod::standard(pattern);
  const ThetaSpec theta(xi, 0.25);
  Rng rng(23);
  const Point x = Point::identity(d);
  const Point y = Point::from_spd(sym_exp(3.0 * Matrix(Vector(xi.direction()).asDiagonal())));
  const std::vector<Point> pts = make_points(d, 16, 0.4, 29);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(distance_to_diamond(pts[i % pts.size()], x, y, theta));
    ++i;
  }
}
BENCHMARK(BM_distance_to_diamond);

void BM_enumerate_words(benchmark::State& state) {
  const int d = 3;
  Rng rng(31);
  std::vector<GroupSpec> groups(2);
  groups[0].name = "a";
  groups[0].generators.push_back(
      GroupElement::from_matrix(sym_exp(rng.traceless_symmetric(d))));
  groups[1].name = "b";
  groups[1].generators.push_back(
      GroupElement::from_matrix(rng.rotation(d) * sym_exp(0.4 * rng.traceless_symmetric(d))));
  const int syllables = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_reduced_words(groups, syllables));
  }
}
BENCHMARK(BM_enumerate_words)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
