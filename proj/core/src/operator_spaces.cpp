#include "modkit/operator_spaces.hpp"

#include <algorithm>
#include <sstream>

#include "modkit/constructions.hpp"
#include "modkit/errors.hpp"

namespace modkit {

namespace {

void require_nondegenerate(const ConcreteModule& m, const char* op) {
    if (!is_nondegenerate(m)) {
        std::ostringstream os;
        os << op << ": X H0 does not span H1 (module is degenerate)";
        throw PreconditionError(os.str());
    }
}

// Full pairwise checks up to this many basis elements; consecutive pairs beyond it.
constexpr Index kPairwiseLimit = 16;

template <class F>
void for_checked_pairs(Index n, F&& f) {
    if (n <= kPairwiseLimit) {
        for (Index a = 0; a < n; ++a)
            for (Index b = 0; b < n; ++b) f(a, b);
        return;
    }
    for (Index a = 0; a < n; ++a) {
        f(a, a);
        f(a, (a + 1) % n);
    }
}

}  // namespace

OperatorLift lift_to_operator(const ConcreteModule& m, const CMatrix& action) {
    const Index k = m.dim();
    const Index n0 = m.h0();
    const Index n1 = m.h1();
    if (action.rows() != k || action.cols() != k) {
        throw ShapeError("module map coordinates must be dim(X) x dim(X)");
    }
    OperatorLift out{CMatrix::Zero(n1, n1), 0.0};
    if (k == 0 || n1 == 0 || n0 == 0) return out;

    CMatrix xs(n1, k * n0);
    CMatrix txs(n1, k * n0);
    for (Index i = 0; i < k; ++i) {
        xs.middleCols(i * n0, n0) = m.basis(i);
        txs.middleCols(i * n0, n0) = m.element(action.col(i));
    }
    // b xs = txs, solved through the adjoint system xs* b* = txs*.
    const CMatrix xs_adj = xs.adjoint();
    const CMatrix txs_adj = txs.adjoint();
    out.op = xs_adj.completeOrthogonalDecomposition().solve(txs_adj).adjoint();
    for (Index i = 0; i < k; ++i) {
        out.residual = std::max(
            out.residual, op_norm(out.op * m.basis(i) - txs.middleCols(i * n0, n0)));
    }
    return out;
}

CMatrix RepresentedCompacts::to_operator(const CMatrix& action) const {
    return lift_to_operator(parent, action).op;
}

CMatrix RepresentedCompacts::to_module_map(const CMatrix& k) const {
    return parent.left_multiplication(k);
}

RepresentedCompacts compacts(const ConcreteModule& m) {
    require_nondegenerate(m, "compacts");
    const Index k = m.dim();
    const Index n1 = m.h1();
    const auto& tol = m.tol();

    std::vector<CMatrix> products;
    std::vector<CMatrix> thetas;
    products.reserve(static_cast<std::size_t>(k * k));
    thetas.reserve(static_cast<std::size_t>(k * k));
    for (Index i = 0; i < k; ++i) {
        for (Index j = 0; j < k; ++j) {
            products.push_back(m.basis(i) * m.basis(j).adjoint());
            // theta_{x_i,x_j}(x_l) = x_i . <x_j, x_l>, routed through the algebra.
            CMatrix theta(k, k);
            for (Index l = 0; l < k; ++l) {
                const auto ip = inner_product(m, m.basis(j), m.basis(l));
                theta.col(l) = m.coordinates(m.right_act(m.basis(i), ip.coords));
            }
            thetas.push_back(std::move(theta));
        }
    }

    RepresentedCompacts rc{m, hs_orthonormalize(products, n1, n1, tol),
                           hs_orthonormalize(thetas, k, k, tol), 0.0, 0.0};

    const auto& basis = rc.algebra_space.basis();
    const Index d = rc.algebra_space.dim();
    for_checked_pairs(d, [&](Index a, Index b) {
        const CMatrix prod = basis[a] * basis[b];
        rc.closure_residual = std::max(rc.closure_residual,
                                       hs_norm(prod - rc.algebra_space.project(prod)));
    });
    for (Index a = 0; a < d; ++a) {
        const CMatrix adj = basis[a].adjoint();
        rc.closure_residual =
            std::max(rc.closure_residual, hs_norm(adj - rc.algebra_space.project(adj)));
    }
    for (std::size_t p = 0; p < products.size(); ++p) {
        rc.iso_residual = std::max(rc.iso_residual, op_norm(rc.to_operator(thetas[p]) - products[p]));
        rc.iso_residual = std::max(rc.iso_residual, op_norm(rc.to_module_map(products[p]) - thetas[p]));
    }
    return rc;
}

ModuleMap RepresentedAdjointables::tau(const CMatrix& b) const {
    return {parent.left_multiplication(b), parent.left_multiplication(b.adjoint())};
}

RepresentedAdjointables adjointables(const ConcreteModule& m) {
    require_nondegenerate(m, "adjointables");
    const Index n1 = m.h1();
    const auto& tol = m.tol();

    std::vector<LinearConstraint> constraints;
    constraints.reserve(static_cast<std::size_t>(m.dim()));
    for (Index i = 0; i < m.dim(); ++i) {
        const CMatrix x = m.basis(i);
        constraints.push_back({[x](const CMatrix& u) { return CMatrix(u * x); }, m.space()});
    }
    // u X in X is complex linear in u; the b* X in X half is the same set conjugated.
    const OperatorSubspace left = solve_linear_membership(constraints, OperatorSubspace::full(n1, n1), tol);
    RepresentedAdjointables r{m, intersect(left, left.adjoint(), tol), 0.0};

    const auto& basis = r.idealizer.basis();
    const Index d = r.idealizer.dim();
    std::vector<CMatrix> taus;
    taus.reserve(static_cast<std::size_t>(d));
    for (Index a = 0; a < d; ++a) taus.push_back(m.left_multiplication(basis[a]));
    for_checked_pairs(d, [&](Index a, Index b) {
        const CMatrix lhs = m.left_multiplication(basis[a] * basis[b]);
        r.homomorphism_residual = std::max(r.homomorphism_residual, op_norm(lhs - taus[a] * taus[b]));
    });
    for (Index a = 0; a < d; ++a) {
        const CMatrix star = m.left_multiplication(basis[a].adjoint());
        r.homomorphism_residual =
            std::max(r.homomorphism_residual, op_norm(star - taus[a].adjoint()));
    }
    return r;
}

CMatrix tau_inverse(const RepresentedAdjointables& r, const ModuleMap& t) {
    const auto& m = r.parent;
    const auto& tol = m.tol();
    const OperatorLift lift = lift_to_operator(m, t.action);
    const double scale = std::max(1.0, adjointable_norm(t));
    if (lift.residual > tol.eq * scale) {
        std::ostringstream os;
        os << "tau_inverse: no operator b with b x = t(x) (residual " << lift.residual
           << "); t is not adjointable or X is degenerate";
        throw PreconditionError(os.str());
    }
    const double bound = adjointable_norm(t) + tol.eq;
    if (op_norm(lift.op) > bound) {
        throw NumericalError("tau_inverse: ||b_t|| exceeds ||t||");
    }
    if (!subspace_contains(r.idealizer, lift.op, tol).contained) {
        throw NumericalError("tau_inverse: b_t is outside the idealizer");
    }
    return lift.op;
}

double adjointable_norm(const ModuleMap& t) { return op_norm(t.action); }

ConcreteModule amplify_module(const ConcreteModule& m, Index n) {
    if (n < 1) throw PreconditionError("amplify_module: n must be positive");
    const Index k = m.dim();
    const Index n0 = m.h0();
    const Index n1 = m.h1();
    CMatrix frame(n1 * n0 * n, n * k);
    for (Index j = 0; j < n; ++j) {
        const CMatrix slot = CMatrix::Identity(n, n).row(j);
        for (Index l = 0; l < k; ++l) frame.col(j * k + l) = vectorize(kron(slot, m.basis(l)));
    }
    return ConcreteModule(OperatorSubspace(n1, n0 * n, std::move(frame)),
                          matrix_amplification(m.algebra(), n), m.tol());
}

ModuleMap amplify_map(const ModuleMap& t, Index n) {
    if (n < 1) throw PreconditionError("amplify_map: n must be positive");
    const CMatrix id = CMatrix::Identity(n, n);
    return {kron(id, t.action), kron(id, t.adjoint_action)};
}

ModuleMap kappa_corner(const ModuleMap& t, Index base_dim) {
    if (t.action.rows() < base_dim || t.action.cols() < base_dim) {
        throw ShapeError("kappa_corner: map is smaller than the base module");
    }
    return {t.action.topLeftCorner(base_dim, base_dim),
            t.adjoint_action.topLeftCorner(base_dim, base_dim)};
}

AmplificationCheck kappa_surjectivity(const ConcreteModule& m, Index n) {
    AmplificationCheck c;
    c.n = n;
    c.amplified_dim = adjointables(amplify_module(m, n)).dim();
    c.base_dim = adjointables(m).dim();
    c.surjective = c.amplified_dim == c.base_dim;
    return c;
}

DawsReport daws_counterexample(Index n) {
    if (n < 2 || n > 6) throw PreconditionError("daws_counterexample: n must lie in [2, 6]");
    DawsReport r;
    r.n = n;
    r.row_dim = adjointables(row_module(n)).dim();
    r.column_dim = adjointables(column_module(n)).dim();
    r.amplified_dim = adjointables(amplify_module(column_module(1), n)).dim();
    r.consistent = r.row_dim == r.amplified_dim;
    r.claim_fails = r.row_dim != r.column_dim;
    return r;
}

}  // namespace modkit
