#include "modkit/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "modkit/constructions.hpp"
#include "modkit/errors.hpp"

namespace modkit {

std::vector<AxiomCheck> check_correspondence(const ConcreteModule& module,
                                             const CStarAlgebra& left_algebra,
                                             const StarHomomorphism& phi) {
    const Index k = module.dim();
    if (!(phi.source() == left_algebra.structure())) {
        throw ShapeError("left action is defined on a different block algebra");
    }
    if (phi.rows() != k || phi.cols() != k) {
        std::ostringstream os;
        os << "left action images are " << phi.rows() << "x" << phi.cols()
           << " but the module has dimension " << k;
        throw ShapeError(os.str());
    }
    const auto& tol = module.tol();
    const auto& s = left_algebra.structure();

    AxiomCheck adj{"left-action adjointable", true, 0.0, {}};
    AxiomCheck star{"left-action star", true, 0.0, {}};
    for (Index g = 0; g < s.dim(); ++g) {
        const auto test = adjointability_test(module, phi.image(g));
        adj.residual = std::max(adj.residual, test.residual);
        if (!test.map && adj.passed) {
            adj.passed = false;
            adj.witness = "phi(" + s.describe(g) + ") is not adjointable";
        }
        const double r = op_norm(phi.image(s.star(g)) - phi.image(g).adjoint());
        star.residual = std::max(star.residual, r);
        if (r > tol.eq * std::max(1.0, op_norm(phi.image(g))) && star.passed) {
            star.passed = false;
            star.witness = "phi(" + s.describe(g) + "*) != phi(" + s.describe(g) + ")*";
        }
    }
    AxiomCheck mult{"left-action multiplicative", true, phi.multiplicativity_residual(), {}};
    if (mult.residual > tol.eq) {
        mult.passed = false;
        for (Index g = 0; g < s.dim() && mult.witness.empty(); ++g) {
            for (Index h = 0; h < s.dim(); ++h) {
                const CMatrix lhs = phi.image(g) * phi.image(h);
                const auto gh = s.product(g, h);
                const double r = gh ? op_norm(lhs - phi.image(*gh)) : op_norm(lhs);
                if (r > tol.eq) {
                    mult.witness = "phi(" + s.describe(g) + ") phi(" + s.describe(h) + ")";
                    break;
                }
            }
        }
    }
    return {adj, star, mult};
}

Correspondence::Correspondence(ConcreteModule module, CStarAlgebra left_algebra,
                               StarHomomorphism phi)
    : module_(std::move(module)), left_(std::move(left_algebra)), phi_(std::move(phi)) {
    for (const auto& c : check_correspondence(module_, left_, phi_)) {
        if (!c.passed) {
            std::ostringstream os;
            os << c.axiom << " fails: " << c.witness << " (residual " << c.residual << ")";
            throw ClosureError(c.axiom, os.str());
        }
    }
}

ModuleMap Correspondence::phi_map(const CVector& a) const {
    return {phi_.apply(a), phi_.apply(left_.star(a))};
}

ModuleMap Correspondence::phi_generator(Index g) const {
    return {phi_.image(g), phi_.image(left_.structure().star(g))};
}

StarHomomorphism phi_from_operators(const ConcreteModule& m, const CStarAlgebra& a,
                                    const std::vector<CMatrix>& ops) {
    if (static_cast<Index>(ops.size()) != a.dim()) {
        throw ShapeError("left action needs one operator per matrix unit of the algebra");
    }
    const auto& s = a.structure();
    std::vector<CMatrix> images;
    images.reserve(ops.size());
    for (Index g = 0; g < a.dim(); ++g) {
        const CMatrix& op = ops[static_cast<std::size_t>(g)];
        if (op.rows() != m.h1() || op.cols() != m.h1()) {
            throw ShapeError("left action operators must act on H1");
        }
        auto cm = m.coordinate_matrix([&op](const CMatrix& x) { return CMatrix(op * x); });
        if (cm.residual > m.tol().rank * std::max(1.0, hs_norm(op))) {
            std::ostringstream os;
            os << "phi(" << s.describe(g) << ") moves X outside itself (residual " << cm.residual
               << ")";
            throw ClosureError("left-action closure", os.str());
        }
        images.push_back(std::move(cm.action));
    }
    return StarHomomorphism(s, std::move(images), m.dim(), m.dim());
}

Correspondence scalar_correspondence(ConcreteModule m) {
    const Index k = m.dim();
    CStarAlgebra scalars = CStarAlgebra::scalars();
    StarHomomorphism phi(scalars.structure(), {CMatrix::Identity(k, k)}, k, k);
    return Correspondence(std::move(m), std::move(scalars), std::move(phi));
}

Correspondence matrix_column_correspondence(Index d, const Tolerances& tol) {
    ConcreteModule m = column_module(d, tol);
    CStarAlgebra a = CStarAlgebra::standard({d});
    StarHomomorphism phi = phi_from_operators(m, a, a.rep().images());
    return Correspondence(std::move(m), std::move(a), std::move(phi));
}

CMatrix RepresentationTriple::pi_of(const CVector& coords) const {
    if (coords.size() != static_cast<Index>(pi.size())) {
        throw ShapeError("module coordinates have the wrong length");
    }
    CMatrix out = CMatrix::Zero(h1(), h0());
    for (std::size_t i = 0; i < pi.size(); ++i) out += coords(static_cast<Index>(i)) * pi[i];
    return out;
}

RepresentationReport verify_representation(const Correspondence& c, const RepresentationTriple& t) {
    const auto& m = c.module();
    const auto& tol = c.tol();
    const Index k = m.dim();
    if (static_cast<Index>(t.pi.size()) != k) throw ShapeError("pi must have one image per basis element");
    if (!(t.lambda.source() == c.left_algebra().structure()) ||
        !(t.rho.source() == c.right_algebra().structure())) {
        throw ShapeError("representation triple is defined on different algebras");
    }
    for (const auto& p : t.pi) {
        if (p.rows() != t.h1() || p.cols() != t.h0()) throw ShapeError("pi images must map H0 to H1");
    }

    RepresentationReport r;
    for (Index g = 0; g < c.left_algebra().dim(); ++g) {
        for (Index i = 0; i < k; ++i) {
            const CMatrix lhs = t.pi_of(c.phi().image(g).col(i));
            r.cco1 = std::max(r.cco1, op_norm(lhs - t.lambda.image(g) * t.pi[i]));
        }
    }
    for (Index g = 0; g < c.right_algebra().dim(); ++g) {
        for (Index i = 0; i < k; ++i) {
            const CVector xb = m.coordinates(m.basis(i) * c.right_algebra().rep().image(g));
            r.cco2 = std::max(r.cco2, op_norm(t.pi_of(xb) - t.pi[i] * t.rho.image(g)));
        }
    }
    for (Index i = 0; i < k; ++i) {
        for (Index j = 0; j < k; ++j) {
            const auto ip = inner_product(m, m.basis(i), m.basis(j));
            r.cco3 = std::max(r.cco3, op_norm(t.rho.apply(ip.coords) - t.pi[i].adjoint() * t.pi[j]));
        }
    }
    for (Index i = 0; i < k; ++i) {
        for (Index j = i; j < k; ++j) {
            CVector v = CVector::Zero(k);
            v(i) += 1.0;
            if (j != i) v(j) += 1.0;
            const double defect = std::abs(op_norm(t.pi_of(v)) - op_norm(m.element(v)));
            r.isometry_defect = std::max(r.isometry_defect, defect);
        }
    }

    CMatrix wide(t.h1(), k * t.h0());
    for (Index i = 0; i < k; ++i) wide.middleCols(i * t.h0(), t.h0()) = t.pi[i];
    r.spanning = numerical_rank(wide, tol.rank) == t.h1();
    r.lambda_nondegenerate = is_nondegenerate(t.lambda, tol);
    r.lambda_faithful = is_injective(t.lambda, tol);

    const Index na = c.left_algebra().dim();
    CMatrix act(k, k * na);
    for (Index g = 0; g < na; ++g) act.middleCols(g * k, k) = c.phi().image(g);
    r.phi_nondegenerate = numerical_rank(act, tol.rank) == k;
    return r;
}

RepresentationTriple build_representation(const Correspondence& c, const Representation& rho) {
    const auto& b = c.right_algebra();
    const auto& tol = c.tol();
    if (!(rho.source() == b.structure())) {
        throw ShapeError("rho is a representation of a different algebra than the module's");
    }
    if (!is_star_homomorphism(rho, tol)) {
        throw PreconditionError("rho is not a *-homomorphism");
    }
    if (!is_nondegenerate(rho, tol)) {
        throw PreconditionError("rho is degenerate: rho(B) H0 does not span H0");
    }
    const Index n0 = rho.rows();

    // (H0, rho) as a correspondence from B to the scalars.
    ConcreteModule h0_module(OperatorSubspace::full(n0, 1), CStarAlgebra::scalars(), tol);
    StarHomomorphism rho_coords(b.structure(), rho.images(), n0, n0);
    const Correspondence h0_corr(std::move(h0_module), b, std::move(rho_coords));
    const TensorModule tm = interior_tensor(c, h0_corr);

    const Index k = c.module().dim();
    const Index n1 = tm.quotient_dim();
    RepresentationTriple t;
    t.rho = rho;
    t.pi.reserve(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) t.pi.push_back(tm.embed.middleCols(i * n0, n0));

    std::vector<CMatrix> lambda;
    lambda.reserve(static_cast<std::size_t>(c.left_algebra().dim()));
    const CMatrix id0 = CMatrix::Identity(n0, n0);
    for (Index g = 0; g < c.left_algebra().dim(); ++g) {
        lambda.push_back(tm.embed * kron(c.phi().image(g), id0) * tm.lift);
    }
    t.lambda = Representation(c.left_algebra().structure(), std::move(lambda), n1, n1);

    const auto report = verify_representation(c, t);
    const double worst = std::max({report.cco1, report.cco2, report.cco3});
    if (worst > tol.eq) {
        std::ostringstream os;
        os << "built representation violates compatibility (cco1 " << report.cco1 << ", cco2 "
           << report.cco2 << ", cco3 " << report.cco3 << ")";
        throw NumericalError(os.str());
    }
    return t;
}

RepresentationTriple build_representation(const Correspondence& c) {
    return build_representation(c, standard_representation(c.right_algebra().structure()));
}

FaithfulnessReport faithfulness_check(const Correspondence& c, const RepresentationTriple& t,
                                      bool rho_faithful) {
    FaithfulnessReport f;
    f.lambda_injective = is_injective(t.lambda, c.tol());
    f.phi_injective = is_injective(c.phi(), c.tol());
    // A non-injective phi always forces a non-injective lambda; the converse needs rho faithful.
    f.consistent = rho_faithful ? f.lambda_injective == f.phi_injective
                                : (f.phi_injective || !f.lambda_injective);
    return f;
}

BimoduleRepresentationTriple build_bimodule_representation(const Correspondence& c,
                                                           const LeftInnerProduct& left_ip,
                                                           const Representation& rho) {
    const Index k = c.module().dim();
    if (left_ip.module_dim != k) throw ShapeError("left inner product belongs to another module");
    BimoduleRepresentationTriple out{build_representation(c, rho), left_ip, 0.0};
    const auto& t = out.triple;
    for (Index i = 0; i < k; ++i) {
        for (Index j = 0; j < k; ++j) {
            const CMatrix lhs = t.lambda.apply(left_ip.at(i, j));
            out.cc3 = std::max(out.cc3, op_norm(lhs - t.pi[i] * t.pi[j].adjoint()));
        }
    }
    if (out.cc3 > c.tol().eq) {
        std::ostringstream os;
        os << "lambda(<x, y>) != pi(x) pi(y)* (residual " << out.cc3 << ")";
        throw ClosureError("cc3", os.str());
    }
    return out;
}

}  // namespace modkit
