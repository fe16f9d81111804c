#pragma once

// Concrete realizations of K_A(X) and L_A(X) inside L(H1), and the matrix
// amplification X^n over M_n(A).
//
// X^n uses the row convention: an element is [x_1 ... x_n] in L(H0^n, H1),
// the right algebra is M_n(A) on H0^n, and basis element j * dim(X) + l is
// the row with x_l in slot j.

#include "modkit/module.hpp"

namespace modkit {

struct OperatorLift {
    CMatrix op;            // b in L(H1)
    double residual = 0.0; // max_i ||b x_i - t(x_i)||_op
};

/// Least-squares b with b x = t(x) on the module basis. Exact only when X H0 = H1.
OperatorLift lift_to_operator(const ConcreteModule& m, const CMatrix& action);

struct RepresentedCompacts {
    ConcreteModule parent;
    OperatorSubspace algebra_space;  // span{x y*} in L(H1)
    OperatorSubspace theta_span;     // span of the theta coordinate matrices
    double closure_residual = 0.0;   // products and adjoints of basis elements
    double iso_residual = 0.0;       // theta_{x_i,x_j} against x_i x_j*, both directions

    /// Operator of a coordinate matrix in theta_span.
    CMatrix to_operator(const CMatrix& action) const;
    /// Coordinate matrix of z -> k z for k in algebra_space.
    CMatrix to_module_map(const CMatrix& k) const;
};

/// Throws PreconditionError when X H0 does not span H1.
RepresentedCompacts compacts(const ConcreteModule& m);

struct RepresentedAdjointables {
    ConcreteModule parent;
    OperatorSubspace idealizer;      // { b : b X in X, b* X in X }
    double homomorphism_residual = 0.0;

    Index dim() const noexcept { return idealizer.dim(); }
    ModuleMap tau(const CMatrix& b) const;
};

/// Throws PreconditionError when X H0 does not span H1.
RepresentedAdjointables adjointables(const ConcreteModule& m);

/// The unique b in the idealizer with b x = t(x). Throws PreconditionError when
/// no such operator exists and NumericalError when ||b|| > ||t|| + tol.eq or b
/// leaves the idealizer.
CMatrix tau_inverse(const RepresentedAdjointables& r, const ModuleMap& t);

/// ||t|| of an adjointable map: the operator norm of its coordinate matrix.
double adjointable_norm(const ModuleMap& t);

ConcreteModule amplify_module(const ConcreteModule& m, Index n);
/// kappa(t) = t acting in every slot.
ModuleMap amplify_map(const ModuleMap& t, Index n);
/// The (1,1) corner s_{11} of a map on X^n, as a map on X.
ModuleMap kappa_corner(const ModuleMap& t, Index base_dim);

struct AmplificationCheck {
    Index n = 1;
    Index amplified_dim = 0;  // dim L_{M_n(A)}(X^n)
    Index base_dim = 0;       // dim L_A(X)
    bool surjective = false;
};

/// Dimension comparison establishing that kappa is onto.
AmplificationCheck kappa_surjectivity(const ConcreteModule& m, Index n);

struct DawsReport {
    Index n = 0;
    Index row_dim = 0;       // dim L_{M_n}(C^n), C^n as rows over M_n
    Index column_dim = 0;    // dim L_C(C^n), C^n as columns over C
    Index amplified_dim = 0; // the row dimension re-derived through amplify
    bool consistent = false; // row_dim == amplified_dim
    bool claim_fails = false;
};

/// Requires 2 <= n <= 6.
DawsReport daws_counterexample(Index n);

}  // namespace modkit
