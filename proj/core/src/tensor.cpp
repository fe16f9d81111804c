#include <algorithm>
#include <sstream>

#include "modkit/correspondence.hpp"
#include "modkit/errors.hpp"

namespace modkit {

CMatrix TensorModule::elementary(Index i, Index p) const {
    if (i < 0 || i >= kx || p < 0 || p >= ky) throw ShapeError("elementary tensor index out of range");
    return embed.middleCols((i * ky + p) * k0, k0);
}

CMatrix TensorModule::tensor(const CVector& x, const CVector& y) const {
    if (x.size() != kx || y.size() != ky) throw ShapeError("tensor factor coordinates have the wrong length");
    CMatrix out = CMatrix::Zero(quotient_dim(), k0);
    for (Index i = 0; i < kx; ++i) {
        if (x(i) == Complex(0.0)) continue;
        for (Index p = 0; p < ky; ++p) out += (x(i) * y(p)) * elementary(i, p);
    }
    return out;
}

TensorModule interior_tensor(const Correspondence& xc, const Correspondence& yc) {
    if (!(xc.right_algebra().structure() == yc.left_algebra().structure())) {
        throw PreconditionError("interior tensor: the right algebra of X is not the left algebra of Y");
    }
    const auto& mx = xc.module();
    const auto& my = yc.module();
    const auto& tol = mx.tol();

    TensorModule t;
    t.kx = mx.dim();
    t.ky = my.dim();
    t.k0 = my.h0();
    const Index n = t.kx * t.ky * t.k0;

    // Block (i p, j q) is <y_p, phi_Y(<x_i, x_j>) y_q>, an operator on K0.
    t.gram = CMatrix::Zero(n, n);
    for (Index i = 0; i < t.kx; ++i) {
        for (Index j = 0; j < t.kx; ++j) {
            const CMatrix act = yc.phi().apply(inner_product(mx, mx.basis(i), mx.basis(j)).coords);
            for (Index q = 0; q < t.ky; ++q) {
                const CMatrix moved = my.element(act.col(q));
                for (Index p = 0; p < t.ky; ++p) {
                    t.gram.block((i * t.ky + p) * t.k0, (j * t.ky + q) * t.k0, t.k0, t.k0) =
                        my.basis(p).adjoint() * moved;
                }
            }
        }
    }
    t.gram = 0.5 * (t.gram + t.gram.adjoint()).eval();

    Index kept = 0;
    CMatrix vecs(n, 0);
    t.kept_eigenvalues.resize(0);
    if (n > 0) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(t.gram);
        const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
        const double top = std::max(0.0, ev(n - 1));
        if (ev(0) < -tol.psd * std::max(1.0, top)) {
            std::ostringstream os;
            os << "interior tensor: Gram matrix has eigenvalue " << ev(0) << " below zero";
            throw NumericalError(os.str());
        }
        const double cut = tol.rank * std::max(1.0, top);
        kept = static_cast<Index>((ev.array() > cut).count());
        vecs = es.eigenvectors().rightCols(kept);
        t.kept_eigenvalues = ev.tail(kept);
    }
    const Eigen::VectorXd inv_sqrt = t.kept_eigenvalues.array().rsqrt();
    t.lift = vecs * inv_sqrt.asDiagonal();
    // Coordinates of the class of an elementary vector: <h_s, e>_G.
    t.embed = inv_sqrt.asDiagonal() * (vecs.adjoint() * t.gram);

    std::vector<CMatrix> elems;
    elems.reserve(static_cast<std::size_t>(t.kx * t.ky));
    for (Index i = 0; i < t.kx; ++i)
        for (Index p = 0; p < t.ky; ++p) elems.push_back(t.elementary(i, p));
    OperatorSubspace space = hs_orthonormalize(elems, kept, t.k0, tol);

    CMatrix spanning(kept * t.k0, static_cast<Index>(elems.size()));
    for (std::size_t e = 0; e < elems.size(); ++e) spanning.col(static_cast<Index>(e)) = vectorize(elems[e]);
    t.expansion = spanning.size() == 0 ? CMatrix::Zero(spanning.cols(), space.dim())
                                       : CMatrix(spanning.completeOrthogonalDecomposition().solve(space.frame()));

    ConcreteModule product(std::move(space), yc.right_algebra(), tol);
    std::vector<CMatrix> lambda;
    lambda.reserve(static_cast<std::size_t>(xc.left_algebra().dim()));
    const CMatrix rest = CMatrix::Identity(t.ky * t.k0, t.ky * t.k0);
    for (Index g = 0; g < xc.left_algebra().dim(); ++g) {
        lambda.push_back(t.embed * kron(xc.phi().image(g), rest) * t.lift);
    }
    StarHomomorphism phi = phi_from_operators(product, xc.left_algebra(), lambda);
    t.product.emplace(std::move(product), xc.left_algebra(), std::move(phi));
    return t;
}

double balancing_residual(const Correspondence& x, const Correspondence& y, const TensorModule& t,
                          const CVector& xc, const CVector& b, const CVector& yc) {
    const auto& mx = x.module();
    const CVector xb = mx.coordinates(mx.right_act(mx.element(xc), b));
    const CVector by = y.phi().apply(b) * yc;
    return hs_norm(t.tensor(xb, yc) - t.tensor(xc, by));
}

CVector tensor_inner_sum(const Correspondence& x, const Correspondence& y,
                         const std::vector<CVector>& xs, const std::vector<CVector>& ys) {
    if (xs.size() != ys.size()) throw ShapeError("tensor_inner_sum: factor lists differ in length");
    const auto& mx = x.module();
    const auto& my = y.module();
    const auto& c = y.right_algebra();
    CMatrix total = CMatrix::Zero(my.h0(), my.h0());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const CMatrix yj = my.element(ys[j]);
        for (std::size_t l = 0; l < xs.size(); ++l) {
            const auto b = inner_product(mx, mx.element(xs[j]), mx.element(xs[l]));
            const CMatrix moved = my.element(y.phi().apply(b.coords) * ys[l]);
            total += yj.adjoint() * moved;
        }
    }
    return c.coordinates_of(total).coords;
}

CMatrix TensorRepresentation::represent_sum(const std::vector<CVector>& xs,
                                            const std::vector<CVector>& ys) const {
    if (xs.size() != ys.size()) throw ShapeError("represent_sum: factor lists differ in length");
    CMatrix out = CMatrix::Zero(triple.h1(), triple.h0());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        for (Index i = 0; i < tensor.kx; ++i) {
            for (Index p = 0; p < tensor.ky; ++p) {
                out += (xs[j](i) * ys[j](p)) * products[static_cast<std::size_t>(i * tensor.ky + p)];
            }
        }
    }
    return out;
}

TensorRepresentation tensor_representation(const Correspondence& xc, const Correspondence& yc,
                                           const Representation& rho_c) {
    const auto& tol = xc.tol();
    const Index ky = yc.module().dim();
    const Index nb = yc.left_algebra().dim();
    CMatrix act(ky, ky * nb);
    for (Index g = 0; g < nb; ++g) act.middleCols(g * ky, ky) = yc.phi().image(g);
    if (numerical_rank(act, tol.rank) != ky) {
        throw PreconditionError("tensor representation: B does not act nondegenerately on Y");
    }

    TensorRepresentation r{interior_tensor(xc, yc), build_representation(yc, rho_c), {}, {}, {}, {}, 0.0};
    r.outer = build_representation(xc, r.inner.lambda);

    const Index kx = r.tensor.kx;
    r.products.reserve(static_cast<std::size_t>(kx * ky));
    for (Index i = 0; i < kx; ++i)
        for (Index p = 0; p < ky; ++p) r.products.push_back(r.outer.pi[i] * r.inner.pi[p]);

    const Index h = r.outer.h1();
    const Index k0 = rho_c.rows();
    const Index dim = r.tensor.module().dim();
    r.triple.lambda = r.outer.lambda;
    r.triple.rho = rho_c;
    r.triple.pi.reserve(static_cast<std::size_t>(dim));
    for (Index s = 0; s < dim; ++s) {
        CMatrix img = CMatrix::Zero(h, k0);
        for (std::size_t e = 0; e < r.products.size(); ++e) {
            img += r.tensor.expansion(static_cast<Index>(e), s) * r.products[e];
        }
        r.triple.pi.push_back(std::move(img));
    }

    r.report = verify_representation(r.tensor.correspondence(), r.triple);
    const auto image = hs_orthonormalize(r.triple.pi, h, k0, tol);
    const auto closure = hs_orthonormalize(r.products, h, k0, tol);
    r.span_distance = projector_distance(image, closure);

    const double worst = std::max({r.report.cco1, r.report.cco2, r.report.cco3});
    if (worst > tol.eq) {
        std::ostringstream os;
        os << "tensor representation violates compatibility (cco1 " << r.report.cco1 << ", cco2 "
           << r.report.cco2 << ", cco3 " << r.report.cco3 << ")";
        throw NumericalError(os.str());
    }
    if (r.span_distance > tol.eq) {
        throw NumericalError("tensor representation: pi(X (x) Y) differs from the span of tau_X(X) pi_Y(Y)");
    }
    if (is_injective(rho_c, tol) && r.report.isometry_defect > tol.eq) {
        throw NumericalError("tensor representation is not isometric although rho_C is faithful");
    }
    return r;
}

}  // namespace modkit
