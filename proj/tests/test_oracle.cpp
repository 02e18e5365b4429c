#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "jnr/oracle.hpp"
#include "jnr/sprocedure.hpp"

using namespace jnr;
using namespace jnr::oracle;
using core::QuadraticFunction;

TEST_SUITE("oracle") {

TEST_CASE("identity map fills the box") {
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(2, 2);
    QuadraticFunction f(Z, Eigen::Vector2d(1, 0), 0.0);
    QuadraticFunction g(Z, Eigen::Vector2d(0, 1), 0.0);
    SampleCloud cloud = sample_range(f, g, Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1), 4000, 7);
    double lo1 = 1, hi1 = -1, lo2 = 1, hi2 = -1;
    for (const auto& pt : cloud.points) {
        CHECK(pt.z[0] >= -1.0);
        CHECK(pt.z[0] <= 1.0);
        CHECK(pt.z[1] >= -1.0);
        CHECK(pt.z[1] <= 1.0);
        lo1 = std::min(lo1, pt.z[0]); hi1 = std::max(hi1, pt.z[0]);
        lo2 = std::min(lo2, pt.z[1]); hi2 = std::max(hi2, pt.z[1]);
    }
    CHECK(lo1 <= -0.98); CHECK(hi1 >= 0.98);
    CHECK(lo2 <= -0.98); CHECK(hi2 >= 0.98);
}

TEST_CASE("sampled range of the parabola instance stays above the parabola") {
    core::CompositeProblem p = testutil::parabola_instance();
    SampleCloud cloud = sample_range(p.f, p.g, Eigen::Vector2d(-6, -6), Eigen::Vector2d(6, 6),
                                     20000, 3);
    for (const auto& pt : cloud.points)
        CHECK(pt.z[1] >= -2.0 * pt.z[0] * pt.z[0] - 1e-9);
}

TEST_CASE("sampling is deterministic per seed") {
    core::CompositeProblem p = testutil::reference_instance();
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(3, -2), hi = Eigen::VectorXd::Constant(3, 2);
    std::ostringstream a, b, c;
    write_csv(sample_range(p.f, p.g, lo, hi, 500, 42), a);
    write_csv(sample_range(p.f, p.g, lo, hi, 500, 42), b);
    write_csv(sample_range(p.f, p.g, lo, hi, 500, 43), c);
    CHECK(a.str() == b.str());
    CHECK(a.str() != c.str());
    CHECK(a.str().substr(0, 15) == "x1,x2,x3,z1,z2\n");
}

TEST_CASE("sampling validates its inputs") {
    core::CompositeProblem p = testutil::reference_instance();
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(3, -2), hi = Eigen::VectorXd::Constant(3, 2);
    CHECK_THROWS_AS(sample_range(p.f, p.g, lo, hi, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_range(p.f, p.g, lo, lo, 10, 1), std::invalid_argument);
}

TEST_CASE("grid minimum bounds the reference optimum from above") {
    core::CompositeProblem p = testutil::reference_instance();
    BruteResult r = brute_min_po4(p, Eigen::VectorXd::Constant(3, -5),
                                  Eigen::VectorXd::Constant(3, 5), 101);
    REQUIRE(r.feasible_found);
    CHECK(r.value >= 43.7102 - 5e-3);
    CHECK(r.value <= 46.0);  // coarse-grid slack
}

TEST_CASE("grid minimum matches a closed form inside the box") {
    // F = z1 with f = |x - (1, 2)|^2: optimum 0 at (1, 2)
    Eigen::Vector2d ctr(1, 2);
    QuadraticFunction f(Eigen::Matrix2d::Identity(), -2.0 * ctr, ctr.squaredNorm());
    QuadraticFunction g(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), 0.0);
    core::CompositeProblem p(f, g, core::RangeObjective(0, 0, 0, 1, 0));
    BruteResult r = brute_min_po4(p, Eigen::Vector2d(-4, -4), Eigen::Vector2d(4, 4), 161);
    REQUIRE(r.feasible_found);
    CHECK(r.value <= 2e-3);
    CHECK((r.x - ctr).norm() <= 0.06);
}

TEST_CASE("empty feasible sets are reported") {
    core::CompositeProblem p = testutil::reference_instance();
    core::CompositeProblem blocked(p.f, p.g, p.objective, Eigen::VectorXd::Zero(1),
                                   Eigen::VectorXd::Zero(1),
                                   Eigen::VectorXd::Constant(1, -1.0));
    BruteResult r = brute_min_po4(blocked, Eigen::VectorXd::Constant(3, -5),
                                  Eigen::VectorXd::Constant(3, 5), 21);
    CHECK_FALSE(r.feasible_found);
}

TEST_CASE("grid refinement never raises the reported minimum") {
    core::CompositeProblem p = testutil::reference_instance();
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(3, -5), hi = Eigen::VectorXd::Constant(3, 5);
    const double coarse = brute_min_po4(p, lo, hi, 41).value;
    const double fine = brute_min_po4(p, lo, hi, 81).value;  // nested refinement
    CHECK(fine <= coarse + 1e-12);
}

TEST_CASE("grid value upper-bounds the certificate value on random instances") {
    std::mt19937 rng(303);
    int compared = 0;
    for (int t = 0; t < 8 && compared < 4; ++t) {
        Eigen::MatrixXd P = testutil::random_symmetric(rng, 2);
        Eigen::MatrixXd Q = testutil::random_symmetric(rng, 2);
        if (linalg::linear_dependence(P, Q).kind != linalg::DependenceKind::Independent) continue;
        core::CompositeProblem p(
            QuadraticFunction(P, testutil::random_vector(rng, 2), 0.0),
            QuadraticFunction(Q, testutil::random_vector(rng, 2), 0.0),
            core::RangeObjective::sum_of_squares());
        sprocedure::ValueResult v = sprocedure::solve_value(p);
        if (v.status != sprocedure::ValueStatus::Optimal) continue;
        BruteResult r = brute_min_po4(p, Eigen::Vector2d(-8, -8), Eigen::Vector2d(8, 8), 201);
        REQUIRE(r.feasible_found);
        CHECK(r.value >= v.value - 1e-6 * (1 + std::abs(v.value)));
        ++compared;
    }
    CHECK(compared >= 3);
}

TEST_CASE("dimension limit is enforced") {
    Eigen::MatrixXd I5 = Eigen::MatrixXd::Identity(5, 5);
    core::CompositeProblem p(QuadraticFunction(I5, Eigen::VectorXd::Zero(5), 0),
                             QuadraticFunction(I5, Eigen::VectorXd::Zero(5), 0),
                             core::RangeObjective::sum_of_squares());
    CHECK_THROWS_AS(brute_min_po4(p, Eigen::VectorXd::Constant(5, -1),
                                  Eigen::VectorXd::Constant(5, 1), 11),
                    std::invalid_argument);
}

TEST_CASE("midpoint probe flags the non-convex range") {
    core::CompositeProblem p = testutil::parabola_instance();
    // two range points on the boundary parabola whose midpoint is below it
    SampleCloud cloud;
    cloud.lo = Eigen::VectorXd::Constant(2, -3);
    cloud.hi = Eigen::VectorXd::Constant(2, 3);
    Eigen::VectorXd w1(2), w2(2);
    w1 << -1, 2;   // maps to (1, -2)
    w2 << 1, -2;   // maps to (-1, -2)
    cloud.points.push_back(core::JointRangePoint::from_witness(p.f, p.g, w1));
    cloud.points.push_back(core::JointRangePoint::from_witness(p.f, p.g, w2));
    cloud.count = 2;
    CHECK(cloud.points[0].z.isApprox(Eigen::Vector2d(1, -2), 1e-12));
    CHECK(cloud.points[1].z.isApprox(Eigen::Vector2d(-1, -2), 1e-12));

    recovery::NewtonOptions fast;
    fast.restarts = 8;
    // the midpoint (0, -2) lies strictly below the parabola boundary
    CHECK_FALSE(recovery::newton_root(p.f, p.g, Eigen::Vector2d(0, -2), fast).has_value());
    CHECK(convexity_probe(p.f, p.g, cloud, 40, fast, 5) >= 1);
}

TEST_CASE("midpoint probe passes on a convex range") {
    core::CompositeProblem p = testutil::reference_instance();
    SampleCloud cloud = sample_range(p.f, p.g, Eigen::VectorXd::Constant(3, -2),
                                     Eigen::VectorXd::Constant(3, 2), 200, 11);
    recovery::NewtonOptions fast;
    fast.restarts = 12;
    CHECK(convexity_probe(p.f, p.g, cloud, 25, fast, 5) == 0);
}

TEST_CASE("single-point cloud yields no pairs") {
    core::CompositeProblem p = testutil::reference_instance();
    SampleCloud cloud;
    cloud.lo = Eigen::VectorXd::Constant(3, -1);
    cloud.hi = Eigen::VectorXd::Constant(3, 1);
    cloud.points.push_back(core::JointRangePoint::from_witness(p.f, p.g, Eigen::Vector3d(0, 0, 0)));
    cloud.count = 1;
    CHECK(convexity_probe(p.f, p.g, cloud, 10, recovery::NewtonOptions{}, 5) == 0);
}

} // TEST_SUITE
