#pragma once

// Dense complex linear algebra shared by every other part of modkit:
// adjoints, operator and Hilbert-Schmidt norms, rank decisions, and
// subspaces of L(H0, H1) stored through Hilbert-Schmidt orthonormal bases.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace modkit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

struct HilbertSpace {
    Index dim = 1;
    friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;
};

/// Numerical thresholds. `rank` is a relative singular-value cutoff, `orth`
/// bounds Gram residuals of orthonormal bases, `eq` bounds operator-norm
/// residuals of identities, `psd` is the eigenvalue floor for positivity.
struct Tolerances {
    double rank = 1e-9;
    double orth = 1e-10;
    double eq = 1e-8;
    double psd = 1e-8;

    /// Throws PreconditionError if any field is negative or not finite.
    void validate() const;
    friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

CMatrix adjoint(const CMatrix& m);

/// Largest singular value; 0 for empty matrices.
double op_norm(const CMatrix& m);
double hs_norm(const CMatrix& m);

/// trace(a* b), conjugate-linear in the first slot.
Complex hs_inner(const CMatrix& a, const CMatrix& b);

CVector vectorize(const CMatrix& m);
CMatrix unvectorize(const CVector& v, Index rows, Index cols);
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Singular values strictly above rel_cutoff * max(1, sigma_max).
Index numerical_rank(const CMatrix& m, double rel_cutoff);

/// Orthonormal basis (columns) of the right null space, same cutoff rule as numerical_rank.
CMatrix null_space(const CMatrix& m, double rel_cutoff);

/// Orthonormal basis (columns) of the column space, same cutoff rule as numerical_rank.
CMatrix range_basis(const CMatrix& m, double rel_cutoff);

/// Orthogonal projector onto a subspace of L(H0, H1), H0 = domain, H1 = codomain.
/// The zero subspace (empty basis) is a valid value.
class OperatorSubspace {
public:
    /// Zero subspace of rows x cols operators.
    OperatorSubspace(Index rows, Index cols);

    /// Columns of `frame` are vectorized basis elements; they must be orthonormal.
    OperatorSubspace(Index rows, Index cols, CMatrix frame);

    static OperatorSubspace full(Index rows, Index cols);

    Index rows() const noexcept { return rows_; }
    Index cols() const noexcept { return cols_; }
    Index dim() const noexcept { return frame_.cols(); }
    HilbertSpace domain() const noexcept { return {cols_}; }
    HilbertSpace codomain() const noexcept { return {rows_}; }

    const std::vector<CMatrix>& basis() const noexcept { return basis_; }
    const CMatrix& frame() const noexcept { return frame_; }

    CVector coordinates(const CMatrix& m) const;
    CMatrix element(const CVector& coords) const;
    CMatrix project(const CMatrix& m) const;
    CMatrix projector() const;

    /// { x* : x in this } as a subspace of L(H1, H0).
    OperatorSubspace adjoint() const;

    /// max |Gram - I| entry of the stored basis.
    double gram_residual() const;

    void require_shape(const CMatrix& m) const;

private:
    Index rows_;
    Index cols_;
    CMatrix frame_;
    std::vector<CMatrix> basis_;
};

/// Orthonormal basis of the span of `mats`, all of shape rows x cols.
/// Directions with singular value below tol.rank relative to the largest are dropped.
OperatorSubspace hs_orthonormalize(std::span<const CMatrix> mats, Index rows, Index cols,
                                   const Tolerances& tol);

struct Membership {
    bool contained = false;
    double residual = 0.0;  // ||m - proj(m)||_HS
};

/// Contained iff ||m - proj(m)||_HS <= tol.rank * max(1, ||m||_HS).
Membership subspace_contains(const OperatorSubspace& s, const CMatrix& m, const Tolerances& tol);

/// HS norm of the difference of the two orthogonal projectors.
double projector_distance(const OperatorSubspace& a, const OperatorSubspace& b);

OperatorSubspace intersect(const OperatorSubspace& a, const OperatorSubspace& b,
                           const Tolerances& tol);

/// One requirement `map(u) in target` on the unknown u. `map` must be complex linear.
struct LinearConstraint {
    std::function<CMatrix(const CMatrix&)> map;
    OperatorSubspace target;
};

/// All u in `unknowns` with map_k(u) in target_k for every k, computed as the SVD
/// null space of the stacked complement projections.
OperatorSubspace solve_linear_membership(std::span<const LinearConstraint> constraints,
                                         const OperatorSubspace& unknowns,
                                         const Tolerances& tol);

struct OrderCheck {
    bool holds = false;
    double min_eigenvalue = 0.0;  // of b - a
};

/// a <= b in the positive-semidefinite order, i.e. lambda_min(b - a) >= -tol.psd.
/// Both inputs must be square, equally sized and self-adjoint within tol.eq.
OrderCheck psd_order_check(const CMatrix& a, const CMatrix& b, const Tolerances& tol);

/// ||a - a*||_op.
double hermitian_defect(const CMatrix& a);

}  // namespace modkit
