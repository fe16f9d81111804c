#include <gtest/gtest.h>

#include "modkit/constructions.hpp"
#include "modkit/errors.hpp"
#include "modkit/operator_spaces.hpp"
#include "modkit/random.hpp"

using namespace modkit;

namespace {

// dim K_B(X) = dim L_B(X) = sum of k_b^2 for a blueprint module.
Index blueprint_compacts_dim(const ModuleBlueprint& bp) {
    Index d = 0;
    for (Index k : bp.module_multiplicity) d += k * k;
    return d;
}

}  // namespace

TEST(Compacts, ColumnModuleIsFullMatrixAlgebra) {
    for (Index d = 1; d <= 4; ++d) {
        const RepresentedCompacts k = compacts(column_module(d));
        EXPECT_EQ(k.algebra_space.dim(), d * d);
        EXPECT_EQ(k.theta_span.dim(), d * d);
        EXPECT_LT(k.closure_residual, 1e-10);
        EXPECT_LT(k.iso_residual, 1e-10);
    }
}

TEST(Compacts, RowModuleHasOneDimensionalCompacts) {
    for (Index n = 2; n <= 4; ++n) EXPECT_EQ(compacts(row_module(n)).algebra_space.dim(), 1);
}

TEST(Compacts, OperatorAndCoordinateViewsAreInverse) {
    Rng rng(41);
    const ConcreteModule m = random_module(rng, random_blueprint(rng, 7));
    const RepresentedCompacts k = compacts(m);
    for (int t = 0; t < 5; ++t) {
        const ModuleMap c = random_compact(rng, m, 2);
        const CMatrix op = k.to_operator(c.action);
        EXPECT_LT(op_norm(k.to_module_map(op) - c.action), 1e-9);
        for (Index i = 0; i < m.dim(); ++i) EXPECT_LT(op_norm(op * m.basis(i) - m.apply(c, m.basis(i))), 1e-9);
    }
}

TEST(Compacts, DegenerateModuleIsRefused) {
    const OperatorSubspace s = OperatorSubspace::full(2, 1);
    const ConcreteModule line(hs_orthonormalize(std::vector<CMatrix>{s.basis()[0]}, 2, 1, {}),
                              CStarAlgebra::scalars());
    EXPECT_THROW(compacts(line), PreconditionError);
    EXPECT_THROW(adjointables(line), PreconditionError);
}

TEST(Adjointables, DimensionsOfNamedModules) {
    EXPECT_EQ(adjointables(column_module(3)).dim(), 9);
    EXPECT_EQ(adjointables(row_module(3)).dim(), 1);
    EXPECT_EQ(adjointables(full_matrix_module(2)).dim(), 4);
}

TEST(Adjointables, RandomModulesMatchBlueprintAndContainCompacts) {
    Rng rng(42);
    for (int t = 0; t < 8; ++t) {
        const ModuleBlueprint bp = random_blueprint(rng, 7);
        const ConcreteModule m = random_module(rng, bp);
        const RepresentedAdjointables a = adjointables(m);
        const RepresentedCompacts k = compacts(m);
        EXPECT_EQ(a.dim(), blueprint_compacts_dim(bp));
        EXPECT_EQ(k.algebra_space.dim(), blueprint_compacts_dim(bp));
        for (const auto& e : k.algebra_space.basis()) EXPECT_TRUE(subspace_contains(a.idealizer, e, {}).contained);
        EXPECT_LT(a.homomorphism_residual, 1e-9);
    }
}

TEST(Adjointables, TauIsIsometricStarHomomorphism) {
    Rng rng(43);
    const ConcreteModule m = random_module(rng, random_blueprint(rng, 7));
    const RepresentedAdjointables a = adjointables(m);
    for (int t = 0; t < 10; ++t) {
        const CMatrix b1 = a.idealizer.element(rng.gaussian_vector(a.dim()));
        const CMatrix b2 = a.idealizer.element(rng.gaussian_vector(a.dim()));
        const ModuleMap t1 = a.tau(b1), t2 = a.tau(b2);
        EXPECT_LT(op_norm(a.tau(b1 * b2).action - compose(t1, t2).action), 1e-9);
        EXPECT_LT(op_norm(a.tau(b1.adjoint()).action - t1.adjoint().action), 1e-9);
        EXPECT_NEAR(adjointable_norm(t1), op_norm(b1), 1e-9 * (1 + op_norm(b1)));
        EXPECT_LT(op_norm(tau_inverse(a, t1) - b1), 1e-9);
        EXPECT_LT(adjoint_relation_residual(m, t1), 1e-9);
    }
}

TEST(Adjointables, LiftRecoversLeftMultiplication) {
    const ConcreteModule m = column_module(3);
    Rng rng(44);
    const CMatrix b = rng.gaussian_matrix(3, 3);
    const OperatorLift l = lift_to_operator(m, m.left_multiplication(b));
    EXPECT_LT(op_norm(l.op - b), 1e-10);
    EXPECT_LT(l.residual, 1e-10);
}

TEST(Amplification, KappaIsSlotwiseAndSurjective) {
    Rng rng(45);
    const ConcreteModule m = random_module(rng, random_blueprint(rng, 5));
    const RepresentedAdjointables a = adjointables(m);
    for (Index n = 1; n <= 3; ++n) {
        const ConcreteModule mn = amplify_module(m, n);
        EXPECT_EQ(mn.dim(), n * m.dim());
        EXPECT_EQ(mn.h0(), n * m.h0());
        const ModuleMap t = random_adjointable(rng, a);
        const ModuleMap k = amplify_map(t, n);
        EXPECT_LT(op_norm(kappa_corner(k, m.dim()).action - t.action), 1e-12);
        EXPECT_LT(op_norm(amplify_map(t.adjoint(), n).action - k.adjoint().action), 1e-12);
        // Slot j of the amplified element carries t applied to slot j.
        const CVector c = rng.gaussian_vector(mn.dim());
        const CMatrix x = mn.element(c);
        const CMatrix tx = mn.apply(k, x);
        for (Index j = 0; j < n; ++j) {
            const CMatrix slot = x.middleCols(j * m.h0(), m.h0());
            EXPECT_LT(op_norm(tx.middleCols(j * m.h0(), m.h0()) - m.apply(t, slot)), 1e-9);
        }
        const AmplificationCheck s = kappa_surjectivity(m, n);
        EXPECT_TRUE(s.surjective);
        EXPECT_EQ(s.amplified_dim, s.base_dim);
    }
}

TEST(RowColumn, AdjointablesDiffer) {
    for (Index n = 2; n <= 4; ++n) {
        const DawsReport r = daws_counterexample(n);
        EXPECT_EQ(r.row_dim, 1);
        EXPECT_EQ(r.column_dim, n * n);
        EXPECT_EQ(r.amplified_dim, 1);
        EXPECT_TRUE(r.consistent);
        EXPECT_TRUE(r.claim_fails);
    }
    EXPECT_THROW(daws_counterexample(1), PreconditionError);
    EXPECT_THROW(daws_counterexample(7), PreconditionError);
}
