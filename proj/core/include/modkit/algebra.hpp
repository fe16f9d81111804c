#pragma once

// Finite-dimensional C*-algebras in Wedderburn form M_{n_1} (+) ... (+) M_{n_k}.
// Abstract elements are coordinate vectors over the block matrix units
// E^{(b)}_{ij}, enumerated block by block and row-major inside a block.

#include <optional>
#include <string>
#include <vector>

#include "modkit/linalg.hpp"

namespace modkit {

struct Generator {
    Index block = 0;
    Index row = 0;
    Index col = 0;
};

/// Bookkeeping for the matrix-unit basis of a direct sum of full matrix blocks.
class BlockStructure {
public:
    BlockStructure() = default;
    explicit BlockStructure(std::vector<Index> blocks);

    const std::vector<Index>& blocks() const noexcept { return blocks_; }
    Index block_count() const noexcept { return static_cast<Index>(blocks_.size()); }
    Index size(Index block) const { return blocks_.at(static_cast<std::size_t>(block)); }
    Index dim() const noexcept { return dim_; }
    Index offset(Index block) const { return offsets_.at(static_cast<std::size_t>(block)); }

    Index index(Index block, Index row, Index col) const;
    Generator generator(Index g) const;
    /// Generator index of E_g*, i.e. the transpose matrix unit.
    Index star(Index g) const;
    /// E_g E_h as a generator index, or nullopt when the product vanishes.
    std::optional<Index> product(Index g, Index h) const;

    std::string describe(Index g) const;

    friend bool operator==(const BlockStructure& a, const BlockStructure& b) {
        return a.blocks_ == b.blocks_;
    }

private:
    std::vector<Index> blocks_;
    std::vector<Index> offsets_;
    Index dim_ = 0;
};

/// A linear map out of a block algebra, given by the image of every matrix unit.
/// The images are matrices of one common shape: operators on a Hilbert space for
/// representations, module-coordinate matrices for left actions on a module.
class StarHomomorphism {
public:
    StarHomomorphism() = default;
    StarHomomorphism(BlockStructure source, std::vector<CMatrix> images, Index rows, Index cols);

    const BlockStructure& source() const noexcept { return source_; }
    const std::vector<CMatrix>& images() const noexcept { return images_; }
    const CMatrix& image(Index g) const { return images_.at(static_cast<std::size_t>(g)); }
    Index rows() const noexcept { return rows_; }
    Index cols() const noexcept { return cols_; }

    CMatrix apply(const CVector& coords) const;
    /// Column g is vec(image(g)).
    CMatrix action_matrix() const;
    /// Images of the generators of one block only, as columns.
    CMatrix block_action_matrix(Index block) const;

    /// max over generator pairs of ||h(g)h(k) - h(gk)||_op.
    double multiplicativity_residual() const;
    /// max over generators of ||h(g)* - h(g*)||_op.
    double adjoint_residual() const;

private:
    BlockStructure source_;
    std::vector<CMatrix> images_;
    Index rows_ = 0;
    Index cols_ = 0;
};

/// Representation of a block algebra on a Hilbert space (images are square).
using Representation = StarHomomorphism;

bool is_star_homomorphism(const StarHomomorphism& h, const Tolerances& tol);
/// rep(A) applied to the space spans it.
bool is_nondegenerate(const Representation& rep, const Tolerances& tol);
bool is_injective(const StarHomomorphism& h, const Tolerances& tol);

/// Identity block representation on C^{n_1 + ... + n_k}.
Representation standard_representation(const BlockStructure& s);

/// C*-algebra together with a faithful nondegenerate concrete representation.
class CStarAlgebra {
public:
    CStarAlgebra() = default;
    /// Validates the *-homomorphism, faithfulness and nondegeneracy invariants.
    CStarAlgebra(Representation rep, const Tolerances& tol = {});

    static CStarAlgebra standard(std::vector<Index> blocks);
    static CStarAlgebra scalars() { return standard({1}); }

    const BlockStructure& structure() const noexcept { return rep_.source(); }
    const std::vector<Index>& blocks() const noexcept { return rep_.source().blocks(); }
    Index dim() const noexcept { return rep_.source().dim(); }
    Index rep_dim() const noexcept { return rep_.rows(); }
    HilbertSpace rep_space() const noexcept { return {rep_.rows()}; }
    const Representation& rep() const noexcept { return rep_; }
    /// rep(A) as a subspace of L(rep_space).
    const OperatorSubspace& span() const noexcept { return span_; }

    CMatrix represent(const CVector& coords) const { return rep_.apply(coords); }

    struct Coordinates {
        CVector coords;
        double residual = 0.0;  // ||m - rep(coords)||_HS
    };
    /// Least-squares abstract coordinates of an operator on rep_space.
    Coordinates coordinates_of(const CMatrix& m) const;

    CVector multiply(const CVector& a, const CVector& b) const;
    CVector star(const CVector& a) const;
    CMatrix block_matrix(const CVector& a, Index block) const;
    /// C*-norm: the largest operator norm over the blocks.
    double norm(const CVector& a) const;
    CVector basis_element(Index g) const;

private:
    Representation rep_;
    OperatorSubspace span_{0, 0};
    CMatrix coord_solver_;  // pseudo-inverse of the action matrix
};

/// Ideal of a block algebra: the direct sum of a subset of its blocks.
class Ideal {
public:
    Ideal() = default;
    Ideal(BlockStructure parent, std::vector<Index> blocks);

    const BlockStructure& parent() const noexcept { return parent_; }
    const std::vector<Index>& blocks() const noexcept { return blocks_; }
    bool contains(Index block) const;
    bool empty() const noexcept { return blocks_.empty(); }
    Index dim() const;
    Ideal complement() const;
    std::vector<Index> generators() const;
    std::string describe() const;  // 1-based, e.g. "{2}" or "{}"

    friend bool operator==(const Ideal& a, const Ideal& b) {
        return a.parent_ == b.parent_ && a.blocks_ == b.blocks_;
    }

private:
    BlockStructure parent_;
    std::vector<Index> blocks_;  // sorted, 0-based
};

/// Blocks annihilated by h. Throws NumericalError if some block is neither
/// annihilated nor mapped injectively.
Ideal kernel(const StarHomomorphism& h, const Tolerances& tol);

struct Quotient {
    CStarAlgebra algebra;       // retained blocks, identity block representation
    StarHomomorphism map;       // A -> L(rep space of the quotient)
    CMatrix projection;         // abstract coordinates A -> A/J
    CMatrix lift;               // A/J -> A through the complementary blocks
};

Quotient quotient(const CStarAlgebra& a, const Ideal& j);

/// All 2^k block subsets in increasing bitmask order; k > 20 is refused.
std::vector<Ideal> enumerate_ideals(const CStarAlgebra& a);

/// h restricted to the generators of j.
StarHomomorphism restrict_to(const StarHomomorphism& h, const Ideal& j);

/// M_n(A) acting on rep_space^n, blocks n * n_b.
CStarAlgebra matrix_amplification(const CStarAlgebra& a, Index n);

}  // namespace modkit
