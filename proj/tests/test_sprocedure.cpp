#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "jnr/oracle.hpp"
#include "jnr/sprocedure.hpp"

using namespace jnr;
using namespace jnr::sprocedure;

namespace {

// The multiplier combination F(z) - gamma + alpha(f - z1) + beta(g - z2)
// + mu.(z1 a + z2 b - c), evaluated directly.
double combination(const core::CompositeProblem& p, const Certificate& c,
                   const Eigen::VectorXd& x, const Eigen::Vector2d& z) {
    double val = p.objective(z) - c.gamma;
    val += c.alpha * (p.f(x) - z[0]);
    val += c.beta * (p.g(x) - z[1]);
    for (int i = 0; i < p.m(); ++i)
        val += c.mu[i] * (z[0] * p.lin_a[i] + z[1] * p.lin_b[i] - p.lin_c[i]);
    return val;
}

core::CompositeProblem random_convex_instance(std::mt19937& rng, int n, int m) {
    for (;;) {
        Eigen::MatrixXd P = testutil::random_symmetric(rng, n);
        Eigen::MatrixXd Q = testutil::random_symmetric(rng, n);
        if (linalg::linear_dependence(P, Q).kind != linalg::DependenceKind::Independent) continue;
        core::QuadraticFunction f(P, testutil::random_vector(rng, n), 0.0);
        core::QuadraticFunction g(Q, testutil::random_vector(rng, n), 0.0);
        Eigen::VectorXd a = testutil::random_vector(rng, m);
        Eigen::VectorXd b = testutil::random_vector(rng, m);
        Eigen::VectorXd c = testutil::random_vector(rng, m).cwiseAbs() +
                            Eigen::VectorXd::Constant(m, 1.0);
        return core::CompositeProblem(f, g, core::RangeObjective::sum_of_squares(), a, b, c);
    }
}

} // namespace

TEST_SUITE("sprocedure") {

TEST_CASE("certificate matrix for the reference instance") {
    core::CompositeProblem p = testutil::reference_instance();
    linalg::SymmetricMatrix M = assemble_M(p, Certificate(0.0, 1.0, 1.0));
    // expected display at alpha = beta = 1, gamma = 0; rows (z1, z2, x, 1)
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(6, 6);
    expect(0, 0) = 1; expect(1, 1) = 2;
    expect(0, 5) = expect(5, 0) = 0.0;   // (mu a + eta1 - alpha)/2 = (1 - 1)/2
    expect(1, 5) = expect(5, 1) = 0.5;   // (2 - 1)/2
    Eigen::MatrixXd APBQ(3, 3);
    APBQ << 2, -2, 2, -2, 3, 3, 2, 3, 4;
    expect.block(2, 2, 3, 3) = APBQ;
    Eigen::Vector3d border(1, 3, 4);     // alpha p + beta q halved on stored data
    expect.block(2, 5, 3, 1) = border;
    expect.block(5, 2, 1, 3) = border.transpose();
    expect(5, 5) = 9;                    // 7 alpha + 2 beta - gamma
    CHECK((M.dense() - expect).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("all-zero problem gives the zero matrix") {
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(2, 2);
    core::QuadraticFunction zf(Z, Eigen::VectorXd::Zero(2), 0.0);
    core::CompositeProblem p(zf, zf, core::RangeObjective(0, 0, 0, 0, 0));
    CHECK(assemble_M(p, Certificate()).max_abs() == 0.0);
}

TEST_CASE("quadratic form reproduces the multiplier combination") {
    std::mt19937 rng(101);
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const int m = static_cast<int>(rng() % 3);
        core::QuadraticFunction f(testutil::random_symmetric(rng, n),
                                  testutil::random_vector(rng, n),
                                  testutil::random_vector(rng, 1)[0]);
        core::QuadraticFunction g(testutil::random_symmetric(rng, n),
                                  testutil::random_vector(rng, n),
                                  testutil::random_vector(rng, 1)[0]);
        core::RangeObjective F(testutil::random_vector(rng, 1)[0],
                               testutil::random_vector(rng, 1)[0],
                               testutil::random_vector(rng, 1)[0],
                               testutil::random_vector(rng, 1)[0],
                               testutil::random_vector(rng, 1)[0]);
        core::CompositeProblem p(f, g, F, testutil::random_vector(rng, m),
                                 testutil::random_vector(rng, m),
                                 testutil::random_vector(rng, m));
        Certificate cert(testutil::random_vector(rng, 1)[0], testutil::random_vector(rng, 1)[0],
                         testutil::random_vector(rng, 1)[0],
                         testutil::random_vector(rng, m).cwiseAbs());
        Eigen::MatrixXd M = assemble_M(p, cert).dense();
        Eigen::VectorXd x = testutil::random_vector(rng, n, 2.0);
        Eigen::Vector2d z{testutil::random_vector(rng, 1)[0], testutil::random_vector(rng, 1)[0]};
        Eigen::VectorXd v(n + 3);
        v << z[0], z[1], x, 1.0;
        const double lhs = v.dot(M * v);
        const double rhs = combination(p, cert, x, z);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * (1 + std::abs(rhs)));
    }
}

TEST_CASE("assembled LMI shape and cross-check") {
    core::CompositeProblem ref = testutil::reference_instance();
    sdp::LmiProblem lmi = assemble_lmi(ref);
    CHECK(lmi.num_vars() == 3);
    CHECK(lmi.dim() == 6);
    CHECK(lmi.nonneg.empty());

    core::CompositeProblem rows = testutil::unattained_instance();
    sdp::LmiProblem lmi2 = assemble_lmi(rows);
    CHECK(lmi2.num_vars() == 5);
    CHECK(lmi2.nonneg == std::vector<int>{3, 4});

    // reassembling M from the LMI at a random point matches assemble_M
    std::mt19937 rng(7);
    Eigen::VectorXd y = testutil::random_vector(rng, 5);
    y.tail(2) = y.tail(2).cwiseAbs();
    Eigen::MatrixXd My = lmi2.F0.dense();
    for (int i = 0; i < 5; ++i) My += y[i] * lmi2.Fi[i].dense();
    Certificate cert(y[0], y[1], y[2], y.tail(2));
    CHECK((My - assemble_M(rows, cert).dense()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("optimal value of the reference instance") {
    ValueResult r = solve_value(testutil::reference_instance());
    CHECK(r.status == ValueStatus::Optimal);
    CHECK(std::abs(r.value - 43.7102) <= 5e-3);
    CHECK(r.certificate.gamma == doctest::Approx(r.value).epsilon(1e-6));
}

TEST_CASE("unbounded-below instance maps to minus infinity") {
    ValueResult r = solve_value(testutil::unbounded_instance());
    CHECK(r.status == ValueStatus::Unbounded);
    CHECK(std::isinf(r.value));
    CHECK(r.value < 0);
}

TEST_CASE("bounded but unattained value is still produced") {
    ValueResult r = solve_value(testutil::unattained_instance());
    CHECK(r.status == ValueStatus::Optimal);
    CHECK(std::abs(r.value) <= 1e-5);
}

TEST_CASE("convex-path precondition is enforced") {
    core::QuadraticFunction f(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), 0);
    core::CompositeProblem dependent(f, f, core::RangeObjective::sum_of_squares());
    CHECK_THROWS_AS(solve_value(dependent), std::invalid_argument);
    CHECK_THROWS_AS(solve_value(testutil::cross_term_instance()), std::invalid_argument);
}

TEST_CASE("certificate verification on the reference optimum") {
    core::CompositeProblem p = testutil::reference_instance();
    ValueResult r = solve_value(p);
    REQUIRE(r.status == ValueStatus::Optimal);
    CertificateReport rep = verify_certificate(p, r.certificate, 10000);
    CHECK(rep.g2_pass);
    CHECK(rep.g1_pass);
    CHECK(rep.g1_checked == 10000);
}

TEST_CASE("implication holds while no multiplier certificate exists") {
    // convex objective over a non-convex range
    core::CompositeProblem ex1 = testutil::parabola_instance();
    CertificateReport r1 = verify_certificate(ex1, Certificate(0, 0, 0), 10000);
    CHECK(r1.g1_pass);
    bool any_g2 = false;
    std::mt19937 rng(13);
    for (int t = 0; t < 40; ++t) {
        Certificate c(0.0, testutil::random_vector(rng, 1)[0] * 3,
                      testutil::random_vector(rng, 1)[0] * 3);
        any_g2 = any_g2 || verify_certificate(ex1, c, 1).g2_pass;
    }
    CHECK_FALSE(any_g2);

    // indefinite objective over a convex range
    core::CompositeProblem ex2 = testutil::cross_term_instance();
    CertificateReport r2 = verify_certificate(ex2, Certificate(0, 0, 0), 10000);
    CHECK(r2.g1_pass);
    for (int t = 0; t < 40; ++t) {
        Certificate c(0.0, testutil::random_vector(rng, 1)[0] * 3,
                      testutil::random_vector(rng, 1)[0] * 3);
        CHECK_FALSE(verify_certificate(ex2, c, 1).g2_pass);
    }
}

TEST_CASE("matrix certificates always dominate the sampled check") {
    std::mt19937 rng(77);
    for (int t = 0; t < 6; ++t) {
        core::CompositeProblem p = random_convex_instance(rng, 2, 1);
        ValueResult r = solve_value(p);
        if (r.status != ValueStatus::Optimal) continue;
        Certificate relaxed = r.certificate;
        relaxed.gamma -= 0.1;  // loosening the bound keeps the matrix PSD
        CertificateReport rep = verify_certificate(p, relaxed, 2000);
        if (!rep.g2_pass) continue;
        CHECK(rep.g1_violations == 0);
    }
}

TEST_CASE("value is antitone in the right-hand side") {
    std::mt19937 rng(211);
    int compared = 0;
    for (int t = 0; t < 10 && compared < 5; ++t) {
        core::CompositeProblem p = random_convex_instance(rng, 2, 2);
        ValueResult base = solve_value(p);
        if (base.status != ValueStatus::Optimal) continue;
        core::CompositeProblem relaxed(p.f, p.g, p.objective, p.lin_a, p.lin_b,
                                       p.lin_c + Eigen::VectorXd::Constant(2, 0.5));
        ValueResult wide = solve_value(relaxed);
        if (wide.status != ValueStatus::Optimal) continue;
        CHECK(wide.value <= base.value + 1e-6 * (1 + std::abs(base.value)));
        ++compared;
    }
    CHECK(compared >= 3);
}

} // TEST_SUITE
