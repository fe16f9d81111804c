#pragma once

// Concrete right Hilbert A-modules: closed subspaces X of L(H0, H1) with
// X A in X and X* X in A, inner product <x, y> = x* y.
//
// Module elements are operators H0 -> H1; module maps are coordinate matrices
// with respect to the HS-orthonormal basis of X: column j of `action` holds
// the coordinates of t(x_j). Because that basis is HS-orthonormal and every
// adjointable map satisfies tr(t(x)* y) = tr(x* t*(y)), the coordinates of t*
// are the conjugate transpose of those of t.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "modkit/algebra.hpp"
#include "modkit/linalg.hpp"

namespace modkit {

struct ModuleMap {
    CMatrix action;
    CMatrix adjoint_action;

    Index dim() const noexcept { return action.rows(); }
    ModuleMap adjoint() const { return {adjoint_action, action}; }
};

ModuleMap compose(const ModuleMap& outer, const ModuleMap& inner);

struct AxiomCheck {
    std::string axiom;
    bool passed = true;
    double residual = 0.0;
    std::string witness;  // empty when passed
};

class ConcreteModule {
public:
    /// Validates both closure axioms; throws ClosureError naming the first failure.
    ConcreteModule(OperatorSubspace space, CStarAlgebra algebra, Tolerances tol = {});

    const OperatorSubspace& space() const noexcept { return space_; }
    const CStarAlgebra& algebra() const noexcept { return algebra_; }
    const Tolerances& tol() const noexcept { return tol_; }

    Index dim() const noexcept { return space_.dim(); }
    Index h0() const noexcept { return space_.cols(); }
    Index h1() const noexcept { return space_.rows(); }
    const CMatrix& basis(Index i) const { return space_.basis().at(static_cast<std::size_t>(i)); }

    CVector coordinates(const CMatrix& x) const { return space_.coordinates(x); }
    CMatrix element(const CVector& coords) const { return space_.element(coords); }

    /// x . a for an abstract element a of the algebra.
    CMatrix right_act(const CMatrix& x, const CVector& a) const;
    CMatrix apply(const ModuleMap& t, const CMatrix& x) const;

    struct CoordinateMap {
        CMatrix action;
        double residual = 0.0;  // worst ||f(x_j) - proj f(x_j)||_HS over the basis
    };
    /// Coordinate matrix of a linear map given on operators.
    CoordinateMap coordinate_matrix(const std::function<CMatrix(const CMatrix&)>& f) const;

    /// Coordinates of x -> b x for an operator b on H1 (not checked for closure).
    CMatrix left_multiplication(const CMatrix& b) const;

private:
    OperatorSubspace space_;
    CStarAlgebra algebra_;
    Tolerances tol_;
};

/// Both closure axioms with their worst residuals and witnesses.
std::vector<AxiomCheck> check_module_axioms(const OperatorSubspace& space,
                                            const CStarAlgebra& algebra, const Tolerances& tol);

ConcreteModule validate_module(OperatorSubspace space, CStarAlgebra algebra, Tolerances tol = {});

struct InnerProduct {
    CMatrix value;   // x* y on H0
    CVector coords;  // abstract algebra coordinates
    double residual = 0.0;
};

/// <x, y>_A = x* y. Throws ClosureError if the product leaves rep(A).
InnerProduct inner_product(const ConcreteModule& m, const CMatrix& x, const CMatrix& y);

/// ||x||, checked against ||x* x||^{1/2}.
double module_norm(const ConcreteModule& m, const CMatrix& x);

/// X H0 spans H1.
bool is_nondegenerate(const ConcreteModule& m);

/// theta_{x,y}: z -> x <y, z>.
ModuleMap rank_one(const ConcreteModule& m, const CMatrix& x, const CMatrix& y);

ModuleMap identity_map(const ConcreteModule& m);

/// max over basis pairs of ||<t x_i, x_j> - <x_i, t* x_j>||_op.
double adjoint_relation_residual(const ConcreteModule& m, const ModuleMap& t);

struct Adjointability {
    std::optional<ModuleMap> map;
    double residual = 0.0;  // least-squares residual of the adjoint equations
};

/// Solves <t x_i, x_j> = <x_i, s x_j> for s by least squares.
Adjointability adjointability_test(const ConcreteModule& m, const CMatrix& action);

struct LemmaCheck {
    bool holds = false;
    double min_eigenvalue = 0.0;
    double t_norm = 0.0;
};

/// <t x, t x> <= ||t||^2 <x, x>. Without `t_norm` the coordinate operator norm is used.
LemmaCheck lemma_tx_check(const ConcreteModule& m, const ModuleMap& t, const CMatrix& x,
                          std::optional<double> t_norm = std::nullopt);

}  // namespace modkit
