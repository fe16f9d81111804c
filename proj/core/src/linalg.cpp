#include "modkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "modkit/errors.hpp"

namespace modkit {

namespace {

// Triangular factor with the same singular values and right singular vectors as m.
CMatrix compress_rows(const CMatrix& m) {
    if (m.rows() <= m.cols()) return m;
    Eigen::HouseholderQR<CMatrix> qr(m);
    CMatrix r = qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
    return r;
}

double cutoff_for(const Eigen::VectorXd& sv, double rel_cutoff) {
    const double top = sv.size() > 0 ? sv(0) : 0.0;
    return rel_cutoff * std::max(1.0, top);
}

}  // namespace

void Tolerances::validate() const {
    for (double v : {rank, orth, eq, psd}) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw PreconditionError("tolerances must be finite and nonnegative");
        }
    }
}

CMatrix adjoint(const CMatrix& m) { return m.adjoint(); }

double op_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(compress_rows(m.rows() < m.cols() ? CMatrix(m.adjoint()) : m));
    return svd.singularValues()(0);
}

double hs_norm(const CMatrix& m) { return m.norm(); }

Complex hs_inner(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("hs_inner: operands act between different Hilbert spaces");
    }
    return (a.conjugate().cwiseProduct(b)).sum();
}

CVector vectorize(const CMatrix& m) {
    return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvectorize(const CVector& v, Index rows, Index cols) {
    if (v.size() != rows * cols) throw ShapeError("unvectorize: length does not match shape");
    return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Index numerical_rank(const CMatrix& m, double rel_cutoff) {
    if (m.size() == 0) return 0;
    const CMatrix r = m.rows() < m.cols() ? compress_rows(m.adjoint()) : compress_rows(m);
    Eigen::JacobiSVD<CMatrix> svd(r);
    const auto& sv = svd.singularValues();
    const double cut = cutoff_for(sv, rel_cutoff);
    return static_cast<Index>((sv.array() > cut).count());
}

CMatrix null_space(const CMatrix& m, double rel_cutoff) {
    const Index n = m.cols();
    if (n == 0) return CMatrix(0, 0);
    if (m.rows() == 0) return CMatrix::Identity(n, n);
    Eigen::JacobiSVD<CMatrix> svd(compress_rows(m), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = cutoff_for(sv, rel_cutoff);
    const Index rank = static_cast<Index>((sv.array() > cut).count());
    return svd.matrixV().rightCols(n - rank);
}

CMatrix range_basis(const CMatrix& m, double rel_cutoff) {
    if (m.size() == 0) return CMatrix(m.rows(), 0);
    Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cut = cutoff_for(sv, rel_cutoff);
    const Index rank = static_cast<Index>((sv.array() > cut).count());
    return svd.matrixU().leftCols(rank);
}

OperatorSubspace::OperatorSubspace(Index rows, Index cols)
    : rows_(rows), cols_(cols), frame_(rows * cols, 0) {
    if (rows < 0 || cols < 0) throw ShapeError("negative Hilbert-space dimension");
}

OperatorSubspace::OperatorSubspace(Index rows, Index cols, CMatrix frame)
    : rows_(rows), cols_(cols), frame_(std::move(frame)) {
    if (rows < 0 || cols < 0) throw ShapeError("negative Hilbert-space dimension");
    if (frame_.rows() != rows * cols) {
        throw ShapeError("subspace frame has the wrong number of rows for its shape");
    }
    basis_.reserve(static_cast<std::size_t>(frame_.cols()));
    for (Index j = 0; j < frame_.cols(); ++j) {
        basis_.push_back(unvectorize(frame_.col(j), rows_, cols_));
    }
}

OperatorSubspace OperatorSubspace::full(Index rows, Index cols) {
    return OperatorSubspace(rows, cols, CMatrix::Identity(rows * cols, rows * cols));
}

void OperatorSubspace::require_shape(const CMatrix& m) const {
    if (m.rows() != rows_ || m.cols() != cols_) {
        std::ostringstream os;
        os << "operator of shape " << m.rows() << "x" << m.cols()
           << " does not act between the subspace's Hilbert spaces (" << rows_ << "x" << cols_
           << ")";
        throw ShapeError(os.str());
    }
}

CVector OperatorSubspace::coordinates(const CMatrix& m) const {
    require_shape(m);
    return frame_.adjoint() * vectorize(m);
}

CMatrix OperatorSubspace::element(const CVector& coords) const {
    if (coords.size() != dim()) throw ShapeError("coordinate vector has the wrong length");
    if (dim() == 0) return CMatrix::Zero(rows_, cols_);
    return unvectorize(frame_ * coords, rows_, cols_);
}

CMatrix OperatorSubspace::project(const CMatrix& m) const { return element(coordinates(m)); }

CMatrix OperatorSubspace::projector() const { return frame_ * frame_.adjoint(); }

OperatorSubspace OperatorSubspace::adjoint() const {
    CMatrix f(rows_ * cols_, dim());
    for (Index j = 0; j < dim(); ++j) f.col(j) = vectorize(basis_[j].adjoint());
    return OperatorSubspace(cols_, rows_, std::move(f));
}

double OperatorSubspace::gram_residual() const {
    if (dim() == 0) return 0.0;
    const CMatrix g = frame_.adjoint() * frame_ - CMatrix::Identity(dim(), dim());
    return g.cwiseAbs().maxCoeff();
}

OperatorSubspace hs_orthonormalize(std::span<const CMatrix> mats, Index rows, Index cols,
                                   const Tolerances& tol) {
    if (mats.empty()) return OperatorSubspace(rows, cols);
    CMatrix stack(rows * cols, static_cast<Index>(mats.size()));
    for (std::size_t j = 0; j < mats.size(); ++j) {
        if (mats[j].rows() != rows || mats[j].cols() != cols) {
            throw ShapeError("hs_orthonormalize: spanning operators have different shapes");
        }
        stack.col(static_cast<Index>(j)) = vectorize(mats[j]);
    }
    OperatorSubspace out(rows, cols, range_basis(stack, tol.rank));
    if (out.gram_residual() > tol.orth) {
        throw NumericalError("hs_orthonormalize: basis failed the orthonormality check");
    }
    return out;
}

Membership subspace_contains(const OperatorSubspace& s, const CMatrix& m, const Tolerances& tol) {
    s.require_shape(m);
    const double residual = hs_norm(m - s.project(m));
    return {residual <= tol.rank * std::max(1.0, hs_norm(m)), residual};
}

double projector_distance(const OperatorSubspace& a, const OperatorSubspace& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("projector_distance: subspaces of different operator spaces");
    }
    return (a.projector() - b.projector()).norm();
}

OperatorSubspace intersect(const OperatorSubspace& a, const OperatorSubspace& b,
                           const Tolerances& tol) {
    const LinearConstraint in_b{[](const CMatrix& u) { return u; }, b};
    return solve_linear_membership(std::span(&in_b, 1), a, tol);
}

OperatorSubspace solve_linear_membership(std::span<const LinearConstraint> constraints,
                                         const OperatorSubspace& unknowns,
                                         const Tolerances& tol) {
    if (constraints.empty() || unknowns.dim() == 0) return unknowns;

    Index total_rows = 0;
    for (const auto& c : constraints) total_rows += c.target.rows() * c.target.cols();

    CMatrix system(total_rows, unknowns.dim());
    for (Index j = 0; j < unknowns.dim(); ++j) {
        Index offset = 0;
        for (const auto& c : constraints) {
            const CMatrix image = c.map(unknowns.basis()[static_cast<std::size_t>(j)]);
            c.target.require_shape(image);
            const CVector v = vectorize(image);
            const Index len = v.size();
            system.block(offset, j, len, 1) = v - c.target.frame() * (c.target.frame().adjoint() * v);
            offset += len;
        }
    }
    const CMatrix kernel = null_space(system, tol.rank);
    return OperatorSubspace(unknowns.rows(), unknowns.cols(), unknowns.frame() * kernel);
}

double hermitian_defect(const CMatrix& a) { return op_norm(a - a.adjoint()); }

OrderCheck psd_order_check(const CMatrix& a, const CMatrix& b, const Tolerances& tol) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
        throw ShapeError("psd_order_check: operands must be square operators on one space");
    }
    for (const CMatrix* m : {&a, &b}) {
        if (hermitian_defect(*m) > tol.eq * std::max(1.0, op_norm(*m))) {
            throw PreconditionError("psd_order_check: operand is not self-adjoint");
        }
    }
    if (a.size() == 0) return {true, 0.0};
    const CMatrix d = b - a;
    const CMatrix h = 0.5 * (d + d.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    return {lo >= -tol.psd, lo};
}

}  // namespace modkit
