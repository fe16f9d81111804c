#include "modkit/module.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "modkit/constructions.hpp"
#include "modkit/errors.hpp"

namespace modkit {

ModuleMap compose(const ModuleMap& outer, const ModuleMap& inner) {
    return {outer.action * inner.action, inner.adjoint_action * outer.adjoint_action};
}

std::vector<AxiomCheck> check_module_axioms(const OperatorSubspace& space,
                                            const CStarAlgebra& algebra, const Tolerances& tol) {
    if (space.cols() != algebra.rep_dim()) {
        std::ostringstream os;
        os << "module operators start on a space of dimension " << space.cols()
           << " but the algebra acts on dimension " << algebra.rep_dim();
        throw ShapeError(os.str());
    }
    AxiomCheck right{"right-action closure", true, 0.0, {}};
    AxiomCheck inner{"inner-product closure", true, 0.0, {}};
    const auto& basis = space.basis();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (Index g = 0; g < algebra.dim(); ++g) {
            const auto mem = subspace_contains(space, basis[i] * algebra.rep().image(g), tol);
            if (mem.residual > right.residual) right.residual = mem.residual;
            if (!mem.contained && right.passed) {
                right.passed = false;
                std::ostringstream os;
                os << "x" << i + 1 << " . " << algebra.structure().describe(g) << " not in X";
                right.witness = os.str();
            }
        }
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const auto mem = subspace_contains(algebra.span(), basis[i].adjoint() * basis[j], tol);
            if (mem.residual > inner.residual) inner.residual = mem.residual;
            if (!mem.contained && inner.passed) {
                inner.passed = false;
                std::ostringstream os;
                os << "x" << i + 1 << "* x" << j + 1 << " not in A";
                inner.witness = os.str();
            }
        }
    }
    return {right, inner};
}

ConcreteModule::ConcreteModule(OperatorSubspace space, CStarAlgebra algebra, Tolerances tol)
    : space_(std::move(space)), algebra_(std::move(algebra)), tol_(tol) {
    tol_.validate();
    for (const auto& c : check_module_axioms(space_, algebra_, tol_)) {
        if (!c.passed) {
            std::ostringstream os;
            os << c.axiom << " fails: " << c.witness << " (residual " << c.residual << ")";
            throw ClosureError(c.axiom, os.str());
        }
    }
}

ConcreteModule validate_module(OperatorSubspace space, CStarAlgebra algebra, Tolerances tol) {
    return ConcreteModule(std::move(space), std::move(algebra), tol);
}

CMatrix ConcreteModule::right_act(const CMatrix& x, const CVector& a) const {
    space_.require_shape(x);
    return x * algebra_.represent(a);
}

CMatrix ConcreteModule::apply(const ModuleMap& t, const CMatrix& x) const {
    return element(t.action * coordinates(x));
}

ConcreteModule::CoordinateMap ConcreteModule::coordinate_matrix(
    const std::function<CMatrix(const CMatrix&)>& f) const {
    CoordinateMap out{CMatrix::Zero(dim(), dim()), 0.0};
    for (Index j = 0; j < dim(); ++j) {
        const CMatrix img = f(basis(j));
        const CVector c = coordinates(img);
        out.action.col(j) = c;
        out.residual = std::max(out.residual, hs_norm(img - element(c)));
    }
    return out;
}

CMatrix ConcreteModule::left_multiplication(const CMatrix& b) const {
    if (b.rows() != h1() || b.cols() != h1()) {
        throw ShapeError("left multiplier must be an operator on H1");
    }
    CMatrix c(dim(), dim());
    for (Index j = 0; j < dim(); ++j) c.col(j) = coordinates(b * basis(j));
    return c;
}

InnerProduct inner_product(const ConcreteModule& m, const CMatrix& x, const CMatrix& y) {
    m.space().require_shape(x);
    m.space().require_shape(y);
    InnerProduct ip;
    ip.value = x.adjoint() * y;
    auto coords = m.algebra().coordinates_of(ip.value);
    ip.coords = std::move(coords.coords);
    ip.residual = coords.residual;
    if (ip.residual > m.tol().rank * std::max(1.0, hs_norm(ip.value))) {
        std::ostringstream os;
        os << "inner product leaves the algebra (residual " << ip.residual << ")";
        throw ClosureError("inner-product closure", os.str());
    }
    return ip;
}

double module_norm(const ConcreteModule& m, const CMatrix& x) {
    m.space().require_shape(x);
    const double n = op_norm(x);
    const double via_inner = std::sqrt(op_norm(x.adjoint() * x));
    if (std::abs(n - via_inner) > m.tol().eq * std::max(1.0, n)) {
        throw NumericalError("module norm disagrees with ||<x,x>||^{1/2}");
    }
    return n;
}

bool is_nondegenerate(const ConcreteModule& m) {
    if (m.h1() == 0) return true;
    CMatrix wide(m.h1(), m.dim() * m.h0());
    for (Index i = 0; i < m.dim(); ++i) wide.middleCols(i * m.h0(), m.h0()) = m.basis(i);
    return numerical_rank(wide, m.tol().rank) == m.h1();
}

ModuleMap rank_one(const ConcreteModule& m, const CMatrix& x, const CMatrix& y) {
    m.space().require_shape(x);
    m.space().require_shape(y);
    const CMatrix xy = x * y.adjoint();
    const CMatrix yx = y * x.adjoint();
    return {m.left_multiplication(xy), m.left_multiplication(yx)};
}

ModuleMap identity_map(const ConcreteModule& m) {
    const CMatrix id = CMatrix::Identity(m.dim(), m.dim());
    return {id, id};
}

double adjoint_relation_residual(const ConcreteModule& m, const ModuleMap& t) {
    double worst = 0.0;
    for (Index i = 0; i < m.dim(); ++i) {
        const CMatrix tx = m.apply(t, m.basis(i));
        for (Index j = 0; j < m.dim(); ++j) {
            const CMatrix lhs = tx.adjoint() * m.basis(j);
            const CMatrix rhs = m.basis(i).adjoint() * m.element(t.adjoint_action.col(j));
            worst = std::max(worst, op_norm(lhs - rhs));
        }
    }
    return worst;
}

Adjointability adjointability_test(const ConcreteModule& m, const CMatrix& action) {
    const Index k = m.dim();
    if (action.rows() != k || action.cols() != k) {
        throw ShapeError("module map coordinates must be dim(X) x dim(X)");
    }
    if (k == 0) return {ModuleMap{action, action}, 0.0};

    // Column j of the unknown s solves sum_l s_lj x_i* x_l = t(x_i)* x_j for all i.
    const Index n0 = m.h0();
    const Index block = n0 * n0;
    CMatrix lhs(k * block, k);
    for (Index i = 0; i < k; ++i) {
        for (Index l = 0; l < k; ++l) {
            lhs.block(i * block, l, block, 1) = vectorize(m.basis(i).adjoint() * m.basis(l));
        }
    }
    CMatrix rhs(k * block, k);
    for (Index i = 0; i < k; ++i) {
        const CMatrix tx = m.element(action.col(i));
        for (Index j = 0; j < k; ++j) {
            rhs.block(i * block, j, block, 1) = vectorize(tx.adjoint() * m.basis(j));
        }
    }
    const CMatrix s = lhs.colPivHouseholderQr().solve(rhs);
    Adjointability out;
    out.residual = (lhs * s - rhs).colwise().norm().maxCoeff();
    const double scale = std::max(1.0, rhs.colwise().norm().maxCoeff());
    if (out.residual <= m.tol().eq * scale) out.map = ModuleMap{action, s};
    return out;
}

LemmaCheck lemma_tx_check(const ConcreteModule& m, const ModuleMap& t, const CMatrix& x,
                          std::optional<double> t_norm) {
    const double norm = t_norm.value_or(op_norm(t.action));
    const CMatrix tx = m.apply(t, x);
    const CMatrix lhs = tx.adjoint() * tx;
    const CMatrix rhs = (norm * norm) * (x.adjoint() * x);
    const auto check = psd_order_check(lhs, rhs, m.tol());
    return {check.holds, check.min_eigenvalue, norm};
}

ConcreteModule column_module(Index d, const Tolerances& tol) {
    return ConcreteModule(OperatorSubspace::full(d, 1), CStarAlgebra::scalars(), tol);
}

ConcreteModule row_module(Index n, const Tolerances& tol) {
    return ConcreteModule(OperatorSubspace::full(1, n), CStarAlgebra::standard({n}), tol);
}

ConcreteModule full_matrix_module(Index n, const Tolerances& tol) {
    return ConcreteModule(OperatorSubspace::full(n, n), CStarAlgebra::standard({n}), tol);
}

}  // namespace modkit
