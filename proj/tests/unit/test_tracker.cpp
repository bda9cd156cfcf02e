#include <cmath>
#include <limits>
#include <random>

#include "bswarm/error.hpp"
#include "bswarm/geometry.hpp"
#include "bswarm/tracker.hpp"
#include "doctest.h"

using namespace bswarm;

TEST_CASE("noiseless least squares recovers the target") {
  const std::vector<Vec2> sensors{{0, 0}, {4, 0}, {0, 4}};
  const Vec2 p(1, 1);
  const auto obs = stack_observations(sensors, p);
  CHECK(obs.H.rows() == 3);
  CHECK((centralized_solution(obs) - p).norm() < 1e-10);
}

TEST_CASE("identity system") {
  StackedObservation obs{Eigen::Matrix<double, Eigen::Dynamic, 2>::Identity(2, 2), Vector(2)};
  obs.z << 3.0, -2.0;
  CHECK((centralized_solution(obs) - Vec2(3, -2)).norm() < 1e-15);
}

TEST_CASE("parallel bearing lines are unobservable") {
  const std::vector<Vec2> sensors{{0, 0}, {0, 4}};
  const Vec2 p(0, 2);
  CHECK(observability_check(sensors, p) < 1e-12);
  CHECK_THROWS_AS(centralized_solution(stack_observations(sensors, p)), ObservabilityError);
}

TEST_CASE("orthogonal bearings give unit singular value") {
  const std::vector<Vec2> sensors{{-1, 0}, {0, -1}};
  CHECK(observability_check(sensors, Vec2(0, 0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(smallest_singular_value(Eigen::Matrix<double, 1, 2>(1.0, 0.0)) == 0.0);
}

TEST_CASE("random layouts: both centralized forms agree with truth") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-5, 5);
  std::uniform_int_distribution<int> count(3, 8);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Vec2> sensors(static_cast<std::size_t>(count(rng)));
    for (auto& s : sensors) s = Vec2(u(rng), u(rng));
    const Vec2 p(u(rng), u(rng));
    bool clear = true;
    for (const auto& s : sensors) clear = clear && (s - p).norm() > 1e-2;
    if (!clear || observability_check(sensors, p) < 0.05) continue;
    const auto obs = stack_observations(sensors, p);
    CHECK((centralized_solution(obs) - p).norm() <= 1e-9 * std::max(1.0, p.norm()));

    // Averaged normal equations from packed local information.
    Phi6 mean = Phi6::Zero();
    for (const auto& s : sensors) mean += local_information(bearing(p, s), s).phi6;
    mean /= static_cast<double>(sensors.size());
    const auto est = local_solution(mean, Vec2::Zero());
    CHECK(est.valid);
    CHECK((est.p_hat - centralized_solution(obs)).norm() <= 1e-9 * std::max(1.0, p.norm()));
  }
}

TEST_CASE("local solve") {
  Mat2 P = 0.5 * Mat2::Identity();
  const auto est = local_solution(pack_phi(P, Vec2(0.5, 1.0)), Vec2::Zero());
  CHECK(est.valid);
  CHECK((est.p_hat - Vec2(1, 2)).norm() < 1e-15);
  CHECK(est.condition == doctest::Approx(1.0));
  const auto unpacked = unpack_phi(pack_phi(P, Vec2(0.5, 1.0)));
  CHECK((unpacked.P * est.p_hat - unpacked.q).norm() < 1e-14);

  // A single bearing is rank one.
  const auto li = local_information(bearing({2, 1}, {0, 0}), Vec2(0, 0));
  const auto rank1 = local_solution(li.phi6, Vec2(7, 8));
  CHECK_FALSE(rank1.valid);
  CHECK(rank1.p_hat == Vec2(7, 8));
  CHECK(std::isinf(rank1.condition));
}

TEST_CASE("condition number") {
  Mat2 P;
  P << 4, 0, 0, 1;
  CHECK(condition_number(P) == doctest::Approx(4.0));
  CHECK(std::isinf(condition_number(Mat2::Zero())));
}
