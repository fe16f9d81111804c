#include "modkit/random.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "modkit/errors.hpp"

namespace modkit {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() { return Complex(normal(), normal()) * std::numbers::sqrt2 * 0.5; }

Index Rng::index(Index lo, Index hi) {
    if (hi < lo) throw PreconditionError("Rng::index: empty range");
    const auto span = static_cast<double>(hi - lo + 1);
    return std::min(hi, lo + static_cast<Index>(uniform() * span));
}

bool Rng::coin(double p) { return uniform() < p; }

CVector Rng::gaussian_vector(Index n) {
    CVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
}

CMatrix Rng::gaussian_matrix(Index rows, Index cols) {
    CMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
    return m;
}

CMatrix Rng::unitary(Index n) {
    if (n == 0) return CMatrix(0, 0);
    const CMatrix g = gaussian_matrix(n, n);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix& r = qr.matrixQR();
    for (Index j = 0; j < n; ++j) {
        const double a = std::abs(r(j, j));
        if (a > 0.0) q.col(j) *= r(j, j) / a;
    }
    return q;
}

Index ModuleBlueprint::h0() const {
    Index s = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) s += blocks[b] * rep_multiplicity[b];
    return s;
}

Index ModuleBlueprint::h1() const {
    Index s = padding;
    for (std::size_t b = 0; b < blocks.size(); ++b) s += module_multiplicity[b] * rep_multiplicity[b];
    return s;
}

Index ModuleBlueprint::module_dim() const {
    Index s = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) s += module_multiplicity[b] * blocks[b];
    return s;
}

ModuleBlueprint random_blueprint(Rng& rng, Index max_h, bool nondegenerate) {
    for (;;) {
        ModuleBlueprint bp;
        const Index count = rng.index(1, 3);
        for (Index b = 0; b < count; ++b) {
            bp.blocks.push_back(rng.index(1, 3));
            bp.rep_multiplicity.push_back(rng.index(1, 2));
            bp.module_multiplicity.push_back(rng.index(0, 3));
        }
        bp.padding = nondegenerate ? 0 : rng.index(1, 2);
        if (bp.module_dim() == 0 || bp.h0() > max_h || bp.h1() > max_h) continue;
        return bp;
    }
}

namespace {

// Block-diagonal placement of kron(E_ij, I_m) for every matrix unit.
std::vector<CMatrix> placed_units(const BlockStructure& s, const std::vector<Index>& mult) {
    Index total = 0;
    for (Index b = 0; b < s.block_count(); ++b) total += s.size(b) * mult[static_cast<std::size_t>(b)];
    std::vector<CMatrix> out;
    out.reserve(static_cast<std::size_t>(s.dim()));
    Index shift = 0;
    for (Index b = 0; b < s.block_count(); ++b) {
        const Index n = s.size(b);
        const Index m = mult[static_cast<std::size_t>(b)];
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
                CMatrix e = CMatrix::Zero(total, total);
                CMatrix unit = CMatrix::Zero(n, n);
                unit(i, j) = 1.0;
                e.block(shift, shift, n * m, n * m) = kron(unit, CMatrix::Identity(m, m));
                out.push_back(std::move(e));
            }
        }
        shift += n * m;
    }
    return out;
}

struct BuiltModule {
    ConcreteModule module;
    std::vector<CMatrix> ranges;  // W_b, isometries into H1
};

BuiltModule build_module(Rng& rng, const ModuleBlueprint& bp, const Tolerances& tol) {
    const BlockStructure s(bp.blocks);
    const Index h0 = bp.h0();
    const Index h1 = bp.h1();
    const CMatrix u0 = rng.unitary(h0);
    const CMatrix u1 = rng.unitary(h1);

    std::vector<CMatrix> images = placed_units(s, bp.rep_multiplicity);
    for (auto& e : images) e = u0 * e * u0.adjoint();
    CStarAlgebra algebra(Representation(s, std::move(images), h0, h0), tol);

    std::vector<CMatrix> spanning;
    std::vector<CMatrix> ranges;
    Index in_shift = 0;
    Index out_shift = 0;
    for (std::size_t b = 0; b < bp.blocks.size(); ++b) {
        const Index n = bp.blocks[b];
        const Index m = bp.rep_multiplicity[b];
        const Index k = bp.module_multiplicity[b];
        const CMatrix p = u0.middleCols(in_shift, n * m);
        const CMatrix w = u1.middleCols(out_shift, k * m);
        for (Index r = 0; r < k; ++r) {
            for (Index c = 0; c < n; ++c) {
                CMatrix z = CMatrix::Zero(k, n);
                z(r, c) = 1.0;
                spanning.push_back(w * kron(z, CMatrix::Identity(m, m)) * p.adjoint());
            }
        }
        ranges.push_back(w);
        in_shift += n * m;
        out_shift += k * m;
    }
    OperatorSubspace space = hs_orthonormalize(spanning, h1, h0, tol);
    return {ConcreteModule(std::move(space), std::move(algebra), tol), std::move(ranges)};
}

}  // namespace

Representation random_representation(Rng& rng, const BlockStructure& s,
                                     const std::vector<Index>& multiplicity) {
    if (static_cast<Index>(multiplicity.size()) != s.block_count()) {
        throw ShapeError("one multiplicity per block is required");
    }
    std::vector<CMatrix> images = placed_units(s, multiplicity);
    const Index total = images.empty() ? 0 : images.front().rows();
    const CMatrix u = rng.unitary(total);
    for (auto& e : images) e = u * e * u.adjoint();
    return Representation(s, std::move(images), total, total);
}

CStarAlgebra random_algebra(Rng& rng, const std::vector<Index>& blocks,
                            const std::vector<Index>& multiplicity, const Tolerances& tol) {
    return CStarAlgebra(random_representation(rng, BlockStructure(blocks), multiplicity), tol);
}

ConcreteModule random_module(Rng& rng, const ModuleBlueprint& bp, const Tolerances& tol) {
    return build_module(rng, bp, tol).module;
}

std::vector<Index> CorrespondenceBlueprint::killed_blocks() const {
    std::vector<Index> out;
    for (std::size_t c = 0; c < left_blocks.size(); ++c) {
        bool used = false;
        for (const auto& row : multiplicity) used = used || row[c] > 0;
        if (!used) out.push_back(static_cast<Index>(c));
    }
    return out;
}

CorrespondenceBlueprint random_correspondence_blueprint(Rng& rng, bool plant_kernel, Index max_h) {
    for (;;) {
        CorrespondenceBlueprint bp;
        const Index nb = rng.index(1, 2);
        for (Index b = 0; b < nb; ++b) {
            bp.module.blocks.push_back(rng.index(1, 2));
            bp.module.rep_multiplicity.push_back(rng.index(1, 2));
        }
        const Index nc = plant_kernel ? rng.index(2, 3) : rng.index(1, 3);
        for (Index c = 0; c < nc; ++c) bp.left_blocks.push_back(rng.index(1, 2));
        const Index victim = plant_kernel ? rng.index(0, nc - 1) : -1;

        bp.multiplicity.assign(static_cast<std::size_t>(nb), std::vector<Index>(static_cast<std::size_t>(nc), 0));
        for (Index b = 0; b < nb; ++b) {
            for (Index c = 0; c < nc; ++c) {
                if (c != victim) bp.multiplicity[b][c] = rng.index(0, 1);
            }
            bp.nullity.push_back(rng.index(0, 1));
        }
        const auto killed = bp.killed_blocks();
        if (plant_kernel && (killed.empty() || static_cast<Index>(killed.size()) == nc)) continue;
        if (!plant_kernel && !killed.empty()) continue;

        bp.module.module_multiplicity.clear();
        for (Index b = 0; b < nb; ++b) {
            Index k = bp.nullity[b];
            for (Index c = 0; c < nc; ++c) k += bp.multiplicity[b][c] * bp.left_blocks[c];
            bp.module.module_multiplicity.push_back(k);
        }
        const auto& m = bp.module;
        if (m.module_dim() == 0 || m.h0() > max_h || m.h1() > max_h) continue;
        return bp;
    }
}

Correspondence random_correspondence(Rng& rng, CorrespondenceBlueprint bp, const Tolerances& tol) {
    const Index nb = static_cast<Index>(bp.module.blocks.size());
    const Index nc = static_cast<Index>(bp.left_blocks.size());
    bp.module.module_multiplicity.assign(static_cast<std::size_t>(nb), 0);
    for (Index b = 0; b < nb; ++b) {
        Index k = bp.nullity[b];
        for (Index c = 0; c < nc; ++c) k += bp.multiplicity[b][c] * bp.left_blocks[c];
        bp.module.module_multiplicity[b] = k;
    }
    BuiltModule built = build_module(rng, bp.module, tol);

    std::vector<Index> left_mult;
    for (Index c = 0; c < nc; ++c) left_mult.push_back(rng.index(1, 2));
    CStarAlgebra left = random_algebra(rng, bp.left_blocks, left_mult, tol);
    const BlockStructure& s = left.structure();

    std::vector<CMatrix> rotations;
    for (Index b = 0; b < nb; ++b) rotations.push_back(rng.unitary(bp.module.module_multiplicity[b]));

    const Index h1 = bp.module.h1();
    std::vector<CMatrix> ops;
    ops.reserve(static_cast<std::size_t>(s.dim()));
    for (Index g = 0; g < s.dim(); ++g) {
        const Generator gen = s.generator(g);
        CMatrix op = CMatrix::Zero(h1, h1);
        for (Index b = 0; b < nb; ++b) {
            const Index k = bp.module.module_multiplicity[b];
            const Index m = bp.module.rep_multiplicity[b];
            CMatrix inner = CMatrix::Zero(k, k);
            Index shift = 0;
            for (Index c = 0; c < nc; ++c) {
                const Index n = bp.left_blocks[c];
                const Index mu = bp.multiplicity[b][c];
                if (c == gen.block && mu > 0) {
                    CMatrix unit = CMatrix::Zero(n, n);
                    unit(gen.row, gen.col) = 1.0;
                    inner.block(shift, shift, n * mu, n * mu) = kron(unit, CMatrix::Identity(mu, mu));
                }
                shift += n * mu;
            }
            inner = rotations[b] * inner * rotations[b].adjoint();
            const CMatrix& w = built.ranges[b];
            op += w * kron(inner, CMatrix::Identity(m, m)) * w.adjoint();
        }
        ops.push_back(std::move(op));
    }
    StarHomomorphism phi = phi_from_operators(built.module, left, ops);
    return Correspondence(std::move(built.module), std::move(left), std::move(phi));
}

ModuleMap random_adjointable(Rng& rng, const RepresentedAdjointables& r) {
    const Index d = r.dim();
    const CVector c = rng.gaussian_vector(d) / std::sqrt(static_cast<double>(std::max<Index>(d, 1)));
    return r.tau(r.idealizer.element(c));
}

ModuleMap random_compact(Rng& rng, const ConcreteModule& m, Index terms) {
    const Index k = m.dim();
    ModuleMap sum{CMatrix::Zero(k, k), CMatrix::Zero(k, k)};
    for (Index j = 0; j < terms; ++j) {
        const ModuleMap t = rank_one(m, m.element(rng.gaussian_vector(k)), m.element(rng.gaussian_vector(k)));
        sum.action += t.action;
        sum.adjoint_action += t.adjoint_action;
    }
    return sum;
}

}  // namespace modkit
