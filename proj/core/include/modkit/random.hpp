#pragma once

// Deterministic generators for property tests and benchmarks.
//
// Modules are assembled from block data instead of sampled spanning sets, so
// every generated space is closed exactly and its dimension is known:
// for block b of B with size n_b, representation multiplicity m_b and module
// multiplicity k_b, X contains W_b (Z (x) I_{m_b}) P_b* for all k_b x n_b
// matrices Z, where P_b embeds the block into H0 and the W_b are isometries
// into H1 with orthogonal ranges.

#include <cstdint>
#include <random>
#include <vector>

#include "modkit/correspondence.hpp"
#include "modkit/operator_spaces.hpp"

namespace modkit {

/// Reproducible across platforms: only the raw mt19937_64 stream is used.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();                  // [0, 1)
    double normal();                   // standard Gaussian
    Complex complex_normal();          // E|z|^2 = 1
    Index index(Index lo, Index hi);   // uniform in [lo, hi]
    bool coin(double p = 0.5);

    CVector gaussian_vector(Index n);
    CMatrix gaussian_matrix(Index rows, Index cols);
    /// Haar-distributed unitary.
    CMatrix unitary(Index n);

private:
    std::mt19937_64 engine_;
};

struct ModuleBlueprint {
    std::vector<Index> blocks;               // n_b
    std::vector<Index> rep_multiplicity;     // m_b >= 1
    std::vector<Index> module_multiplicity;  // k_b >= 0
    Index padding = 0;                       // H1 directions outside X H0

    Index h0() const;
    Index h1() const;
    Index module_dim() const;
};

/// Blocks and multiplicities with h0 <= max_h and h1 <= max_h.
ModuleBlueprint random_blueprint(Rng& rng, Index max_h = 8, bool nondegenerate = true);

/// Faithful nondegenerate representation: each block repeated m_b times, rotated
/// by a random unitary.
CStarAlgebra random_algebra(Rng& rng, const std::vector<Index>& blocks,
                            const std::vector<Index>& multiplicity, const Tolerances& tol = {});

/// Representation with the given multiplicities (0 kills a block), rotated by a random unitary.
Representation random_representation(Rng& rng, const BlockStructure& s,
                                     const std::vector<Index>& multiplicity);

ConcreteModule random_module(Rng& rng, const ModuleBlueprint& bp, const Tolerances& tol = {});

struct CorrespondenceBlueprint {
    ModuleBlueprint module;  // module_multiplicity is derived from the fields below
    std::vector<Index> left_blocks;
    /// multiplicity[b][c]: copies of left block c inside L_B of module block b.
    std::vector<std::vector<Index>> multiplicity;
    std::vector<Index> nullity;  // extra dimensions of module block b where A acts by 0

    /// Left blocks with no copy anywhere, i.e. ker(phi).
    std::vector<Index> killed_blocks() const;
};

/// When plant_kernel is set at least one left block is annihilated.
CorrespondenceBlueprint random_correspondence_blueprint(Rng& rng, bool plant_kernel,
                                                        Index max_h = 8);

Correspondence random_correspondence(Rng& rng, CorrespondenceBlueprint bp,
                                     const Tolerances& tol = {});

/// Uniformly rotated element of the idealizer, mapped through tau.
ModuleMap random_adjointable(Rng& rng, const RepresentedAdjointables& r);

/// Random finite-rank combination sum_j theta_{x_j, y_j}, `terms` summands.
ModuleMap random_compact(Rng& rng, const ConcreteModule& m, Index terms);

}  // namespace modkit
