#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hypersurf/amsler.hpp"
#include "hypersurf/errors.hpp"
#include "hypersurf/lelieuvre.hpp"
#include "support.hpp"

using namespace hypersurf;

namespace {

/// Consistent three-corner data: r1 = r0 + nu1 x nu0, r2 = r0 - nu2 x nu0, normals close to +z.
QuadSolveInputs random_quad(std::mt19937& rng, double rho_spread) {
    std::uniform_real_distribution<double> tilt(-0.4, 0.4);
    std::uniform_real_distribution<double> rho(1.0 - rho_spread, 1.0 + rho_spread);
    QuadSolveInputs in;
    in.n0 = normalized(Vec3{tilt(rng), tilt(rng), 1.0});
    in.n1 = normalized(Vec3{tilt(rng), tilt(rng), 1.0});
    in.n2 = normalized(Vec3{tilt(rng), tilt(rng), 1.0});
    in.rho0 = rho(rng);
    in.rho1 = rho(rng);
    in.rho2 = rho(rng);
    in.rho12 = rho(rng);
    const Vec3 nu0 = std::sqrt(in.rho0) * in.n0;
    in.r0 = {0.3, -0.2, 0.1};
    in.r1 = in.r0 + cross(std::sqrt(in.rho1) * in.n1, nu0);
    in.r2 = in.r0 - cross(std::sqrt(in.rho2) * in.n2, nu0);
    return in;
}

/// Root of |C w - nu0|^2 = rho12 on the branch through the reflection C = 2d/|w|^2, by bisection.
double bisect_c(const QuadSolveInputs& in) {
    const Vec3 nu0 = std::sqrt(in.rho0) * in.n0;
    const Vec3 w = std::sqrt(in.rho1) * in.n1 + std::sqrt(in.rho2) * in.n2;
    const double d = dot(w, nu0);
    const auto f = [&](double c) { return norm2(c * w - nu0) - in.rho12; };
    // f is convex with its minimum at C = d/|w|^2; the wanted root lies on the side of the reflection.
    double lo = d / norm2(w);
    double hi = lo + (d >= 0.0 ? 1.0 : -1.0);
    while (f(hi) < 0.0) hi = lo + 2.0 * (hi - lo);
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST(ScaleNormal, FourthRootOfCurvature) {
    const Vec3 n{0.0, 0.6, 0.8};
    const Vec3 nu = scale_normal(n, -4.0);
    EXPECT_NEAR(norm(nu), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_EQ(scale_normal(n, -1.0), n);
    EXPECT_THROW(scale_normal(n, 0.0), ConfigError);
    EXPECT_THROW(scale_normal(n, 0.5), ConfigError);
}

TEST(ConstantUpdate, ReflectionOfMinusN0) {
    std::mt19937 rng(7);
    for (int k = 0; k < 50; ++k) {
        const QuadSolveInputs in = random_quad(rng, 0.0);
        const QuadSolveOutputs out = quad_update_constant(in);
        const Vec3 w = in.n1 + in.n2;
        const Vec3 e = normalized(w);
        // Householder: -N0 reflected in the plane orthogonal to w.
        const Vec3 expected = -in.n0 + 2.0 * dot(in.n0, e) * e;
        EXPECT_LT(norm(out.n12 - expected), 1e-14);
        EXPECT_NEAR(norm(out.n12), 1.0, 1e-14);
        EXPECT_LT(norm(cross(out.n12 + in.n0, w)), 1e-14);
    }
}

TEST(VariableUpdate, HouseholderLimitIsBitwise) {
    std::mt19937 rng(11);
    for (int k = 0; k < 50; ++k) {
        QuadSolveInputs in = random_quad(rng, 0.0);
        in.rho0 = in.rho1 = in.rho2 = in.rho12 = 1.0;
        const QuadSolveOutputs a = quad_update_constant(in);
        const QuadSolveOutputs b = quad_update_variable(in);
        EXPECT_EQ(a.n12, b.n12);
        EXPECT_EQ(a.r12, b.r12);
        EXPECT_EQ(a.c, b.c);
        EXPECT_EQ(b.alpha, 0.0);
    }
}

TEST(VariableUpdate, MatchesBisectionOracle) {
    std::mt19937 rng(3);
    for (int k = 0; k < 200; ++k) {
        const QuadSolveInputs in = random_quad(rng, 0.3);
        const QuadSolveOutputs out = quad_update_variable(in);
        const double c = bisect_c(in);
        EXPECT_NEAR(out.c, c, 1e-12 * std::max(1.0, std::abs(c)));
    }
}

TEST(VariableUpdate, QuadInvariantsOnRandomData) {
    std::mt19937 rng(5);
    for (int k = 0; k < 200; ++k) {
        const QuadSolveInputs in = random_quad(rng, 0.3);
        const QuadSolveOutputs out = quad_update_variable(in);
        const Vec3 nu0 = std::sqrt(in.rho0) * in.n0;
        const Vec3 nu1 = std::sqrt(in.rho1) * in.n1;
        const Vec3 nu2 = std::sqrt(in.rho2) * in.n2;
        const Vec3 nu12 = std::sqrt(in.rho12) * out.n12;
        EXPECT_NEAR(norm2(nu12), in.rho12, 1e-13);
        EXPECT_NEAR(norm(out.n12), 1.0, 1e-14);
        EXPECT_LT(norm(cross(nu12 + nu0, nu1 + nu2)), 1e-13);
        // Both routes to r12 agree and the closing edges are tangent at both ends.
        EXPECT_LT(norm((in.r1 - cross(nu12, nu1)) - out.r12), 1e-14);
        EXPECT_LT(std::abs(dot(out.r12 - in.r2, out.n12)), 1e-14);
        EXPECT_LT(std::abs(dot(out.r12 - in.r2, in.n2)), 1e-14);
        EXPECT_LT(std::abs(dot(out.r12 - in.r1, out.n12)), 1e-14);
        EXPECT_LT(std::abs(dot(out.r12 - in.r1, in.n1)), 1e-14);
    }
}

TEST(VariableUpdate, FrozenValue) {
    // Symmetric quad with normals tilted by 0.1 rad; C checked against the bisection oracle.
    QuadSolveInputs in;
    in.n0 = {0.0, 0.0, 1.0};
    in.n1 = {std::sin(0.1), 0.0, std::cos(0.1)};
    in.n2 = {0.0, std::sin(0.1), std::cos(0.1)};
    in.rho12 = 0.9;
    const QuadSolveOutputs out = quad_update_variable(in);
    // |w|^2 = 2 + 2 <n1, n2> = 2 + 2 cos^2(0.1), d = 2 cos(0.1).
    const double cz = std::cos(0.1);
    const double ww = 2.0 + 2.0 * cz * cz;
    const double d = 2.0 * cz;
    const double expected = (d + std::sqrt(d * d + ww * (0.9 - 1.0))) / ww;
    EXPECT_NEAR(out.c, expected, 1e-14);
    EXPECT_NEAR(out.c, bisect_c(in), 1e-13);
    EXPECT_NEAR(out.c, 0.9741967672710342, 1e-13);
}

TEST(VariableUpdate, OrthogonalBranch) {
    QuadSolveInputs in;
    in.n0 = {0.0, 0.0, 1.0};
    in.n1 = {1.0, 0.0, 0.0};
    in.n2 = {0.0, 1.0, 0.0};
    in.rho12 = 3.0;
    const QuadSolveOutputs out = quad_update_variable(in);
    EXPECT_TRUE(out.degenerate_branch);
    EXPECT_DOUBLE_EQ(out.c, 1.0);  // sqrt((3 - 1) / 2)
    EXPECT_NEAR(norm2(std::sqrt(3.0) * out.n12), 3.0, 1e-14);

    in.rho12 = 0.5;
    EXPECT_THROW(quad_update_variable(in), UnsolvableQuadError);
}

TEST(VariableUpdate, Errors) {
    QuadSolveInputs in;
    in.n0 = {0.0, 0.0, 1.0};
    in.n1 = {0.0, 0.6, 0.8};
    in.n2 = {0.0, 0.6, 0.8};
    in.rho12 = 1e-3;  // far below the reachable range
    EXPECT_THROW(quad_update_variable(in), UnsolvableQuadError);

    in.n2 = -in.n1;
    EXPECT_THROW(quad_update_variable(in), DegenerateQuadError);
    EXPECT_THROW(quad_update_constant(in), DegenerateQuadError);
}

TEST(Sweep, ConstantSectorSatisfiesQuadRelations) {
    CurvatureSpec curv;
    curv.family = CurvatureFamily::Constant;
    const SectorSpec spec = SectorSpec::principal(1.2, 1.0, 0.8, 12, 9);
    const SectorGrid s = sweep_sector_constant(init_boundary(spec, curv));
    const auto m = hypersurf::testing::quad_maxima(s);
    EXPECT_EQ(m.quads, 12u * 9u);
    EXPECT_LT(m.worst(), 1e-12);
}

TEST(Sweep, ErrorsCarryTheNode) {
    CurvatureSpec curv;
    curv.family = CurvatureFamily::Constant;
    const SectorSpec spec = SectorSpec::principal(1.2, 1.0, 1.0, 4, 4);
    const SectorGrid s = init_boundary(spec, curv);
    std::vector<double> rho(s.node_count(), 1.0);
    rho[1 * 5 + 1] = 1e-6;
    try {
        (void)sweep_sector(s, rho);
        FAIL() << "expected an unsolvable quad";
    } catch (const UnsolvableQuadError& e) {
        EXPECT_NE(std::string(e.what()).find("node (1,1)"), std::string::npos) << e.what();
    }
}
