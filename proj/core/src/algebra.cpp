#include "modkit/algebra.hpp"

#include <algorithm>
#include <sstream>

#include "modkit/errors.hpp"

namespace modkit {

BlockStructure::BlockStructure(std::vector<Index> blocks) : blocks_(std::move(blocks)) {
    offsets_.reserve(blocks_.size());
    for (Index n : blocks_) {
        if (n < 1) throw PreconditionError("block sizes must be positive");
        offsets_.push_back(dim_);
        dim_ += n * n;
    }
}

Index BlockStructure::index(Index block, Index row, Index col) const {
    const Index n = size(block);
    if (row < 0 || col < 0 || row >= n || col >= n) {
        throw ShapeError("matrix unit index outside its block");
    }
    return offset(block) + row * n + col;
}

Generator BlockStructure::generator(Index g) const {
    if (g < 0 || g >= dim_) throw ShapeError("generator index out of range");
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), g);
    const auto b = static_cast<Index>(std::distance(offsets_.begin(), it)) - 1;
    const Index local = g - offset(b);
    const Index n = size(b);
    return {b, local / n, local % n};
}

Index BlockStructure::star(Index g) const {
    const Generator e = generator(g);
    return index(e.block, e.col, e.row);
}

std::optional<Index> BlockStructure::product(Index g, Index h) const {
    const Generator a = generator(g);
    const Generator b = generator(h);
    if (a.block != b.block || a.col != b.row) return std::nullopt;
    return index(a.block, a.row, b.col);
}

std::string BlockStructure::describe(Index g) const {
    const Generator e = generator(g);
    std::ostringstream os;
    os << "E[" << e.block + 1 << "](" << e.row + 1 << "," << e.col + 1 << ")";
    return os.str();
}

StarHomomorphism::StarHomomorphism(BlockStructure source, std::vector<CMatrix> images, Index rows,
                                   Index cols)
    : source_(std::move(source)), images_(std::move(images)), rows_(rows), cols_(cols) {
    if (static_cast<Index>(images_.size()) != source_.dim()) {
        throw ShapeError("homomorphism needs exactly one image per matrix unit");
    }
    if (rows_ != cols_) throw ShapeError("*-homomorphism images must be square");
    for (const auto& m : images_) {
        if (m.rows() != rows_ || m.cols() != cols_) {
            throw ShapeError("homomorphism images have inconsistent shapes");
        }
    }
}

CMatrix StarHomomorphism::apply(const CVector& coords) const {
    if (coords.size() != source_.dim()) throw ShapeError("algebra element has the wrong length");
    CMatrix out = CMatrix::Zero(rows_, cols_);
    for (Index g = 0; g < source_.dim(); ++g) out += coords(g) * images_[g];
    return out;
}

CMatrix StarHomomorphism::action_matrix() const {
    CMatrix m(rows_ * cols_, source_.dim());
    for (Index g = 0; g < source_.dim(); ++g) m.col(g) = vectorize(images_[g]);
    return m;
}

CMatrix StarHomomorphism::block_action_matrix(Index block) const {
    const Index n = source_.size(block);
    CMatrix m(rows_ * cols_, n * n);
    for (Index k = 0; k < n * n; ++k) m.col(k) = vectorize(images_[source_.offset(block) + k]);
    return m;
}

double StarHomomorphism::multiplicativity_residual() const {
    double worst = 0.0;
    for (Index g = 0; g < source_.dim(); ++g) {
        for (Index h = 0; h < source_.dim(); ++h) {
            const CMatrix lhs = images_[g] * images_[h];
            const auto gh = source_.product(g, h);
            const double r = gh ? op_norm(lhs - images_[*gh]) : op_norm(lhs);
            worst = std::max(worst, r);
        }
    }
    return worst;
}

double StarHomomorphism::adjoint_residual() const {
    double worst = 0.0;
    for (Index g = 0; g < source_.dim(); ++g) {
        worst = std::max(worst, op_norm(images_[g].adjoint() - images_[source_.star(g)]));
    }
    return worst;
}

bool is_star_homomorphism(const StarHomomorphism& h, const Tolerances& tol) {
    return h.multiplicativity_residual() <= tol.eq && h.adjoint_residual() <= tol.eq;
}

bool is_nondegenerate(const Representation& rep, const Tolerances& tol) {
    CMatrix wide(rep.rows(), rep.cols() * rep.source().dim());
    for (Index g = 0; g < rep.source().dim(); ++g) {
        wide.middleCols(g * rep.cols(), rep.cols()) = rep.image(g);
    }
    return numerical_rank(wide, tol.rank) == rep.rows();
}

bool is_injective(const StarHomomorphism& h, const Tolerances& tol) {
    return numerical_rank(h.action_matrix(), tol.rank) == h.source().dim();
}

Representation standard_representation(const BlockStructure& s) {
    Index total = 0;
    for (Index n : s.blocks()) total += n;
    std::vector<CMatrix> images;
    images.reserve(static_cast<std::size_t>(s.dim()));
    Index shift = 0;
    for (Index b = 0; b < s.block_count(); ++b) {
        const Index n = s.size(b);
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
                CMatrix e = CMatrix::Zero(total, total);
                e(shift + i, shift + j) = 1.0;
                images.push_back(std::move(e));
            }
        }
        shift += n;
    }
    return Representation(s, std::move(images), total, total);
}

CStarAlgebra::CStarAlgebra(Representation rep, const Tolerances& tol) : rep_(std::move(rep)) {
    if (rep_.rows() != rep_.cols()) {
        throw ShapeError("an algebra representation must act on a single Hilbert space");
    }
    if (!is_star_homomorphism(rep_, tol)) {
        std::ostringstream os;
        os << "embedding is not a *-homomorphism (multiplicativity residual "
           << rep_.multiplicativity_residual() << ", adjoint residual " << rep_.adjoint_residual()
           << ")";
        throw ClosureError("star-homomorphism", os.str());
    }
    for (Index g = 0; g < dim(); ++g) {
        if (op_norm(rep_.image(g)) <= tol.eq) {
            throw ClosureError("faithful",
                               "embedding annihilates matrix unit " + structure().describe(g));
        }
    }
    if (!is_injective(rep_, tol)) {
        throw ClosureError("faithful", "embedding is not injective");
    }
    if (!is_nondegenerate(rep_, tol)) {
        throw ClosureError("nondegenerate", "rep(A) applied to the representation space does not span it");
    }
    span_ = hs_orthonormalize(rep_.images(), rep_.rows(), rep_.cols(), tol);
    const CMatrix act = rep_.action_matrix();
    coord_solver_ = act.size() == 0 ? CMatrix(dim(), act.rows())
                                    : CMatrix(act.completeOrthogonalDecomposition().pseudoInverse());
}

CStarAlgebra CStarAlgebra::standard(std::vector<Index> blocks) {
    return CStarAlgebra(standard_representation(BlockStructure(std::move(blocks))));
}

CStarAlgebra::Coordinates CStarAlgebra::coordinates_of(const CMatrix& m) const {
    if (m.rows() != rep_dim() || m.cols() != rep_dim()) {
        throw ShapeError("operator does not act on the algebra's representation space");
    }
    Coordinates out;
    out.coords = dim() == 0 ? CVector(0) : CVector(coord_solver_ * vectorize(m));
    out.residual = hs_norm(m - represent(out.coords));
    return out;
}

CMatrix CStarAlgebra::block_matrix(const CVector& a, Index block) const {
    const Index n = structure().size(block);
    const Index off = structure().offset(block);
    CMatrix m(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) m(i, j) = a(off + i * n + j);
    }
    return m;
}

CVector CStarAlgebra::multiply(const CVector& a, const CVector& b) const {
    CVector out(dim());
    for (Index blk = 0; blk < structure().block_count(); ++blk) {
        const CMatrix p = block_matrix(a, blk) * block_matrix(b, blk);
        const Index n = p.rows();
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) out(structure().offset(blk) + i * n + j) = p(i, j);
        }
    }
    return out;
}

CVector CStarAlgebra::star(const CVector& a) const {
    CVector out(dim());
    for (Index g = 0; g < dim(); ++g) out(structure().star(g)) = std::conj(a(g));
    return out;
}

double CStarAlgebra::norm(const CVector& a) const {
    double n = 0.0;
    for (Index blk = 0; blk < structure().block_count(); ++blk) {
        n = std::max(n, op_norm(block_matrix(a, blk)));
    }
    return n;
}

CVector CStarAlgebra::basis_element(Index g) const {
    CVector e = CVector::Zero(dim());
    e(g) = 1.0;
    return e;
}

Ideal::Ideal(BlockStructure parent, std::vector<Index> blocks)
    : parent_(std::move(parent)), blocks_(std::move(blocks)) {
    std::sort(blocks_.begin(), blocks_.end());
    blocks_.erase(std::unique(blocks_.begin(), blocks_.end()), blocks_.end());
    for (Index b : blocks_) {
        if (b < 0 || b >= parent_.block_count()) throw ShapeError("ideal names a missing block");
    }
}

bool Ideal::contains(Index block) const {
    return std::binary_search(blocks_.begin(), blocks_.end(), block);
}

Index Ideal::dim() const {
    Index d = 0;
    for (Index b : blocks_) d += parent_.size(b) * parent_.size(b);
    return d;
}

Ideal Ideal::complement() const {
    std::vector<Index> rest;
    for (Index b = 0; b < parent_.block_count(); ++b) {
        if (!contains(b)) rest.push_back(b);
    }
    return Ideal(parent_, std::move(rest));
}

std::vector<Index> Ideal::generators() const {
    std::vector<Index> gens;
    for (Index b : blocks_) {
        const Index n = parent_.size(b);
        for (Index k = 0; k < n * n; ++k) gens.push_back(parent_.offset(b) + k);
    }
    return gens;
}

std::string Ideal::describe() const {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < blocks_.size(); ++i) os << (i ? "," : "") << blocks_[i] + 1;
    os << "}";
    return os.str();
}

Ideal kernel(const StarHomomorphism& h, const Tolerances& tol) {
    const auto& s = h.source();
    std::vector<Index> killed;
    for (Index b = 0; b < s.block_count(); ++b) {
        const Index n = s.size(b);
        const Index r = numerical_rank(h.block_action_matrix(b), tol.rank);
        if (r == 0) {
            killed.push_back(b);
        } else if (r != n * n) {
            std::ostringstream os;
            os << "block " << b + 1 << " is neither annihilated nor mapped injectively (rank " << r
               << " of " << n * n << "); the map is not a *-homomorphism";
            throw NumericalError(os.str());
        }
    }
    return Ideal(s, std::move(killed));
}

Quotient quotient(const CStarAlgebra& a, const Ideal& j) {
    if (!(j.parent() == a.structure())) {
        throw PreconditionError("ideal belongs to a different algebra");
    }
    const Ideal keep = j.complement();
    std::vector<Index> sizes;
    for (Index b : keep.blocks()) sizes.push_back(a.structure().size(b));
    Quotient q{CStarAlgebra::standard(sizes), {}, {}, {}};

    const Index qd = q.algebra.dim();
    q.projection = CMatrix::Zero(qd, a.dim());
    Index col = 0;
    for (Index g : keep.generators()) q.projection(col++, g) = 1.0;
    q.lift = q.projection.transpose();

    std::vector<CMatrix> images;
    images.reserve(static_cast<std::size_t>(a.dim()));
    for (Index g = 0; g < a.dim(); ++g) {
        images.push_back(q.algebra.represent(q.projection.col(g)));
    }
    q.map = StarHomomorphism(a.structure(), std::move(images), q.algebra.rep_dim(),
                             q.algebra.rep_dim());
    return q;
}

std::vector<Ideal> enumerate_ideals(const CStarAlgebra& a) {
    const Index k = a.structure().block_count();
    if (k > 20) throw PreconditionError("ideal enumeration refused for more than 20 blocks");
    std::vector<Ideal> out;
    out.reserve(std::size_t{1} << k);
    for (unsigned long mask = 0; mask < (1ul << k); ++mask) {
        std::vector<Index> bs;
        for (Index b = 0; b < k; ++b) {
            if (mask & (1ul << b)) bs.push_back(b);
        }
        out.emplace_back(a.structure(), std::move(bs));
    }
    return out;
}

StarHomomorphism restrict_to(const StarHomomorphism& h, const Ideal& j) {
    // Keeps the parent's generator numbering; generators outside j map to zero.
    std::vector<CMatrix> images(h.images().size(), CMatrix::Zero(h.rows(), h.cols()));
    for (Index g : j.generators()) images[static_cast<std::size_t>(g)] = h.image(g);
    return StarHomomorphism(h.source(), std::move(images), h.rows(), h.cols());
}

CStarAlgebra matrix_amplification(const CStarAlgebra& a, Index n) {
    if (n < 1) throw PreconditionError("amplification order must be positive");
    const auto& s = a.structure();
    std::vector<Index> sizes;
    for (Index b : s.blocks()) sizes.push_back(n * b);
    BlockStructure big(sizes);
    std::vector<CMatrix> images;
    images.reserve(static_cast<std::size_t>(big.dim()));
    for (Index b = 0; b < s.block_count(); ++b) {
        const Index nb = s.size(b);
        for (Index r = 0; r < n * nb; ++r) {
            for (Index c = 0; c < n * nb; ++c) {
                CMatrix unit = CMatrix::Zero(n, n);
                unit(r / nb, c / nb) = 1.0;
                images.push_back(kron(unit, a.rep().image(s.index(b, r % nb, c % nb))));
            }
        }
    }
    const Index d = n * a.rep_dim();
    return CStarAlgebra(Representation(big, std::move(images), d, d));
}

}  // namespace modkit
