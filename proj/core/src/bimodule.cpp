#include <algorithm>
#include <sstream>

#include "modkit/correspondence.hpp"
#include "modkit/errors.hpp"

namespace modkit {

namespace {

std::vector<CMatrix> theta_coordinates(const ConcreteModule& m) {
    std::vector<CMatrix> out;
    out.reserve(static_cast<std::size_t>(m.dim() * m.dim()));
    for (Index i = 0; i < m.dim(); ++i)
        for (Index j = 0; j < m.dim(); ++j) out.push_back(rank_one(m, m.basis(i), m.basis(j)).action);
    return out;
}

OperatorSubspace span_of(const std::vector<CMatrix>& mats, Index n, const Tolerances& tol) {
    return hs_orthonormalize(mats, n, n, tol);
}

CVector unit(Index n, Index i, Index j = -1) {
    CVector v = CVector::Zero(n);
    v(i) += 1.0;
    if (j >= 0 && j != i) v(j) += 1.0;
    return v;
}

// Solves phi|_domain (a) = theta_{x_i, x_j} for every basis pair and checks the
// resulting left inner product against the bimodule identities.
LeftInnerProduct recover_left_ip(const Correspondence& c, const Ideal& domain,
                                 const std::vector<CMatrix>& thetas) {
    const auto& m = c.module();
    const auto& a = c.left_algebra();
    const auto& tol = c.tol();
    const Index k = m.dim();
    const std::vector<Index> gens = domain.generators();
    const Index ng = static_cast<Index>(gens.size());

    CMatrix f(k * k, ng);
    for (Index g = 0; g < ng; ++g) f.col(g) = vectorize(c.phi().image(gens[g]));
    if (ng > 0 && numerical_rank(f, tol.rank) != ng) {
        throw NumericalError("phi is not injective on the blocks outside its kernel");
    }
    CMatrix rhs(k * k, k * k);
    for (Index p = 0; p < k * k; ++p) rhs.col(p) = vectorize(thetas[static_cast<std::size_t>(p)]);

    LeftInnerProduct ip;
    ip.domain = domain;
    ip.module_dim = k;
    CMatrix by_qr = CMatrix::Zero(ng, k * k);
    CMatrix by_svd = CMatrix::Zero(ng, k * k);
    if (ng > 0 && k > 0) {
        by_qr = f.colPivHouseholderQr().solve(rhs);
        by_svd = f.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
        ip.solve_residual = (f * by_qr - rhs).colwise().norm().maxCoeff();
        ip.uniqueness_residual = (by_qr - by_svd).colwise().norm().maxCoeff();
    }
    ip.values.assign(static_cast<std::size_t>(k * k), CVector::Zero(a.dim()));
    for (Index p = 0; p < k * k; ++p) {
        for (Index g = 0; g < ng; ++g) ip.values[static_cast<std::size_t>(p)](gens[g]) = by_qr(g, p);
    }

    for (Index i = 0; i < k; ++i) {
        for (Index j = i; j < k; ++j) {
            const CVector x = unit(k, i, j);
            const double lhs = a.norm(ip.evaluate(x, x));
            const double nx = op_norm(m.element(x));
            ip.norm_residual = std::max(ip.norm_residual, std::abs(lhs - nx * nx));
        }
    }
    for (Index i = 0; i < k; ++i) {
        for (Index j = 0; j < k; ++j) {
            const CMatrix left = c.phi().apply(ip.at(i, j));
            for (Index l = 0; l < k; ++l) {
                const auto b = inner_product(m, m.basis(j), m.basis(l));
                const CVector right = m.coordinates(m.right_act(m.basis(i), b.coords));
                ip.bimod_residual = std::max(ip.bimod_residual, (left.col(l) - right).norm());
            }
        }
    }
    for (Index g = 0; g < a.dim(); ++g) {
        const ModuleMap t = c.phi_generator(g);
        for (Index i = 0; i < k; ++i) {
            const CMatrix ax = m.element(t.action.col(i));
            for (Index j = 0; j < k; ++j) {
                const CMatrix lhs = ax.adjoint() * m.basis(j);
                const CMatrix rhs_ip = m.basis(i).adjoint() * m.element(t.adjoint_action.col(j));
                ip.adjoint_residual = std::max(ip.adjoint_residual, op_norm(lhs - rhs_ip));
            }
        }
    }
    return ip;
}

}  // namespace

CVector LeftInnerProduct::evaluate(const CVector& x, const CVector& y) const {
    if (x.size() != module_dim || y.size() != module_dim) {
        throw ShapeError("left inner product arguments have the wrong length");
    }
    CVector out = CVector::Zero(values.empty() ? 0 : values.front().size());
    for (Index i = 0; i < module_dim; ++i)
        for (Index j = 0; j < module_dim; ++j) out += (x(i) * std::conj(y(j))) * at(i, j);
    return out;
}

BimoduleDecision bimodule_criterion(const Correspondence& c) {
    const auto& m = c.module();
    const auto& tol = c.tol();
    const Index k = m.dim();
    const auto thetas = theta_coordinates(m);
    const OperatorSubspace compacts = span_of(thetas, k, tol);
    const OperatorSubspace image = span_of(c.phi().images(), k, tol);

    BimoduleDecision d;
    d.compacts_dim = compacts.dim();
    d.phi_image_dim = image.dim();
    d.is_bimodule = true;
    for (const auto& th : thetas) {
        const auto mem = subspace_contains(image, th, tol);
        d.containment_residual = std::max(d.containment_residual, mem.residual);
        d.is_bimodule = d.is_bimodule && mem.contained;
    }
    d.kernel = kernel(c.phi(), tol);
    if (d.is_bimodule) d.left_ip = recover_left_ip(c, d.kernel.complement(), thetas);
    return d;
}

IdealDecision ideal_criterion(const Correspondence& c) {
    const auto& m = c.module();
    const auto& tol = c.tol();
    const Index k = m.dim();
    const auto thetas = theta_coordinates(m);
    const OperatorSubspace compacts = span_of(thetas, k, tol);
    const Ideal ker = kernel(c.phi(), tol);

    IdealDecision d;
    for (const Ideal& j : enumerate_ideals(c.left_algebra())) {
        ++d.examined;
        const bool injective = std::none_of(j.blocks().begin(), j.blocks().end(),
                                            [&](Index b) { return ker.contains(b); });
        if (!injective) continue;
        std::vector<CMatrix> images;
        for (Index g : j.generators()) images.push_back(c.phi().image(g));
        const double dist = projector_distance(span_of(images, k, tol), compacts);
        if (dist <= tol.eq) {
            d.ideal = j;
            d.projector_distance = dist;
            d.left_ip = recover_left_ip(c, j, thetas);
            break;
        }
    }
    return d;
}

}  // namespace modkit
