#pragma once

// (A, B) correspondences, their representations on pairs of Hilbert spaces,
// interior tensor products and the bimodule criteria.
//
// The left action phi maps each matrix unit of A to a coordinate matrix on
// the module basis. Because that basis is HS-orthonormal, phi(a*) must be the
// conjugate transpose of phi(a).

#include <optional>
#include <string>
#include <vector>

#include "modkit/algebra.hpp"
#include "modkit/module.hpp"

namespace modkit {

/// Shape, adjointability, *-preservation and multiplicativity of phi.
std::vector<AxiomCheck> check_correspondence(const ConcreteModule& module,
                                             const CStarAlgebra& left_algebra,
                                             const StarHomomorphism& phi);

class Correspondence {
public:
    /// Throws ClosureError naming the first failed left-action axiom.
    Correspondence(ConcreteModule module, CStarAlgebra left_algebra, StarHomomorphism phi);

    const ConcreteModule& module() const noexcept { return module_; }
    const CStarAlgebra& left_algebra() const noexcept { return left_; }
    const CStarAlgebra& right_algebra() const noexcept { return module_.algebra(); }
    const StarHomomorphism& phi() const noexcept { return phi_; }
    const Tolerances& tol() const noexcept { return module_.tol(); }

    ModuleMap phi_map(const CVector& a) const;
    ModuleMap phi_generator(Index g) const;

private:
    ConcreteModule module_;
    CStarAlgebra left_;
    StarHomomorphism phi_;
};

/// Coordinates of x -> op_g x for operators op_g on H1, one per matrix unit of A.
/// Throws ClosureError if some op_g x leaves X.
StarHomomorphism phi_from_operators(const ConcreteModule& m, const CStarAlgebra& a,
                                    const std::vector<CMatrix>& ops);

/// The scalars acting by multiples of the identity.
Correspondence scalar_correspondence(ConcreteModule m);

/// A = M_d acting on the column module C^d by matrix multiplication.
Correspondence matrix_column_correspondence(Index d, const Tolerances& tol = {});

struct RepresentationTriple {
    Representation lambda;  // A on H1
    Representation rho;     // B on H0
    std::vector<CMatrix> pi;  // pi_X(x_i) for the module basis, H0 -> H1

    Index h0() const noexcept { return rho.rows(); }
    Index h1() const noexcept { return lambda.rows(); }
    CMatrix pi_of(const CVector& coords) const;
};

struct RepresentationReport {
    double cco1 = 0.0;  // pi(phi(a) x) = lambda(a) pi(x)
    double cco2 = 0.0;  // pi(x b) = pi(x) rho(b)
    double cco3 = 0.0;  // rho(<x, y>) = pi(x)* pi(y)
    double isometry_defect = 0.0;  // | ||pi(x)|| - ||x|| | on basis elements and pair sums
    bool spanning = false;           // pi(X) H0 spans H1
    bool lambda_nondegenerate = false;
    bool lambda_faithful = false;
    bool phi_nondegenerate = false;  // phi(A) X spans X
};

/// Residuals are maxima over generators and module basis elements.
RepresentationReport verify_representation(const Correspondence& c, const RepresentationTriple& t);

/// rho nondegenerate is required (PreconditionError). H1 = X (x)_rho H0; the three
/// compatibility conditions are asserted (NumericalError) before returning.
RepresentationTriple build_representation(const Correspondence& c, const Representation& rho);
RepresentationTriple build_representation(const Correspondence& c);  // identity block rep of B

struct FaithfulnessReport {
    bool lambda_injective = false;
    bool phi_injective = false;
    /// lambda_injective == phi_injective; only meaningful when rho is faithful.
    bool consistent = false;
};

FaithfulnessReport faithfulness_check(const Correspondence& c, const RepresentationTriple& t,
                                      bool rho_faithful);

/// A-valued left inner product on basis pairs, valued in the blocks of `domain`.
struct LeftInnerProduct {
    Ideal domain;                 // blocks on which phi is injective
    Index module_dim = 0;
    std::vector<CVector> values;  // coordinates in A of <x_i, x_j>, index i * dim + j
    double solve_residual = 0.0;
    double uniqueness_residual = 0.0;  // QR versus SVD solve
    double norm_residual = 0.0;        // | ||<x,x>|| - ||x||^2 |
    double bimod_residual = 0.0;       // <x,y> z = x <y,z>_B
    double adjoint_residual = 0.0;     // <a x, y>_B = <x, a* y>_B

    const CVector& at(Index i, Index j) const {
        return values.at(static_cast<std::size_t>(i * module_dim + j));
    }
    /// Linear in the first argument, conjugate linear in the second.
    CVector evaluate(const CVector& x, const CVector& y) const;
};

struct BimoduleDecision {
    bool is_bimodule = false;
    Index compacts_dim = 0;
    Index phi_image_dim = 0;
    double containment_residual = 0.0;  // worst theta outside phi(A)
    Ideal kernel;
    std::optional<LeftInnerProduct> left_ip;
};

/// Bimodule iff K_B(X) lies in phi(A); the left inner product is then recovered
/// in A / ker(phi), lifted to A through the complementary blocks.
BimoduleDecision bimodule_criterion(const Correspondence& c);

struct IdealDecision {
    std::optional<Ideal> ideal;
    double projector_distance = 0.0;  // for the accepted ideal
    Index examined = 0;
    std::optional<LeftInnerProduct> left_ip;
};

/// First ideal J (in bitmask order) with phi|_J injective onto K_B(X).
IdealDecision ideal_criterion(const Correspondence& c);

struct BimoduleRepresentationTriple {
    RepresentationTriple triple;
    LeftInnerProduct left_ip;
    double cc3 = 0.0;  // lambda(<x, y>) = pi(x) pi(y)*
};

/// Throws ClosureError("cc3") when the left inner product is incompatible with the triple.
BimoduleRepresentationTriple build_bimodule_representation(const Correspondence& c,
                                                           const LeftInnerProduct& left_ip,
                                                           const Representation& rho);

/// X (x)_phiY Y realized inside L(K0, H), where K0 carries the representation of C.
struct TensorModule {
    Index kx = 0;
    Index ky = 0;
    Index k0 = 0;           // dim K0
    CMatrix gram;           // elementary vectors x_i (x) y_p (x) e_k, index (i * ky + p) * k0 + k
    Eigen::VectorXd kept_eigenvalues;
    CMatrix embed;          // r x N: elementary coordinates -> quotient H
    CMatrix lift;           // N x r: orthonormal quotient basis in elementary coordinates
    std::optional<Correspondence> product;  // over C with the induced A action
    CMatrix expansion;      // kx*ky x dim(product): product basis over elementary tensors

    Index quotient_dim() const noexcept { return embed.rows(); }
    const Correspondence& correspondence() const { return *product; }
    const ConcreteModule& module() const { return product->module(); }

    /// x_i (x) y_p as an operator K0 -> H.
    CMatrix elementary(Index i, Index p) const;
    /// x (x) y for module coordinates of x in X and y in Y.
    CMatrix tensor(const CVector& x, const CVector& y) const;
};

/// Throws PreconditionError when the right algebra of X is not the left algebra
/// of Y, NumericalError when the Gram matrix is not positive semidefinite.
TensorModule interior_tensor(const Correspondence& x, const Correspondence& y);

/// ||(x b) (x) y - x (x) (phi_Y(b) y)||_HS.
double balancing_residual(const Correspondence& x, const Correspondence& y, const TensorModule& t,
                          const CVector& xc, const CVector& b, const CVector& yc);

/// <sum_j x_j (x) y_j, sum_l x_l (x) y_l>_C from the defining formula, as C coordinates.
CVector tensor_inner_sum(const Correspondence& x, const Correspondence& y,
                         const std::vector<CVector>& xs, const std::vector<CVector>& ys);

struct TensorRepresentation {
    TensorModule tensor;
    RepresentationTriple inner;   // (lambda_B, rho_C, pi_Y) on H_Y
    RepresentationTriple outer;   // (lambda_A, lambda_B, tau_X) on H
    RepresentationTriple triple;  // (lambda_A, rho_C, pi) for the tensor correspondence
    RepresentationReport report;
    std::vector<CMatrix> products;  // tau_X(x_i) pi_Y(y_p), index i * ky + p
    double span_distance = 0.0;     // pi(X (x) Y) against span of the products

    /// sum_j tau_X(x_j) pi_Y(y_j).
    CMatrix represent_sum(const std::vector<CVector>& xs, const std::vector<CVector>& ys) const;
};

/// Requires phi_Y(B) Y to span Y (PreconditionError).
TensorRepresentation tensor_representation(const Correspondence& x, const Correspondence& y,
                                           const Representation& rho_c);

}  // namespace modkit
