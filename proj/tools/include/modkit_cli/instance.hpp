#pragma once

// Instance files: JSON with sections "algebras", "modules", "correspondences"
// and "representations", cross-referenced by string identifiers. Matrices are
// {"rows": r, "cols": c, "data": [[[re, im], ...], ...]} in row-major order.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "modkit/correspondence.hpp"

namespace modkit::cli {

/// Malformed or inconsistent input; carries the section path or line in its message.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TolerancePatch {
    std::optional<double> rank;
    std::optional<double> orth;
    std::optional<double> eq;
    std::optional<double> psd;

    void apply(Tolerances& t) const;
    bool empty() const { return !rank && !orth && !eq && !psd; }
};

struct AlgebraSpec {
    std::vector<Index> blocks;
    std::optional<std::vector<CMatrix>> embedding;  // one operator per matrix unit
};

struct ModuleSpec {
    Index h0 = 0;
    Index h1 = 0;
    std::vector<CMatrix> span;
    std::string algebra;
};

struct CorrespondenceSpec {
    std::string module;
    std::string left_algebra;
    std::optional<std::vector<CMatrix>> phi;       // coordinates on the listed span
    std::optional<std::vector<CMatrix>> phi_left;  // operators on H1
};

struct RepresentationSpec {
    std::string algebra;
    std::vector<CMatrix> rho;
};

struct Instance {
    std::string version = "1";
    TolerancePatch tolerances;
    std::map<std::string, AlgebraSpec> algebras;
    std::map<std::string, ModuleSpec> modules;
    std::map<std::string, CorrespondenceSpec> correspondences;
    std::map<std::string, RepresentationSpec> representations;
};

Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);

nlohmann::ordered_json matrix_to_json(const CMatrix& m);
nlohmann::ordered_json instance_to_json(const Instance& inst);
std::string serialize_instance(const Instance& inst);

/// Resolves references and builds validated library objects on demand.
class Workspace {
public:
    Workspace(Instance inst, Tolerances tol);

    const Instance& instance() const noexcept { return inst_; }
    const Tolerances& tol() const noexcept { return tol_; }

    CStarAlgebra algebra(const std::string& id) const;
    /// HS-orthonormalized span, shape-checked but not validated as a module.
    OperatorSubspace module_space(const std::string& id) const;
    ConcreteModule module(const std::string& id) const;
    /// Left action in module-basis coordinates, not validated.
    StarHomomorphism phi(const std::string& id) const;
    Correspondence correspondence(const std::string& id) const;
    Representation representation(const std::string& id) const;

    /// The single id of a section when `id` is empty, else `id` itself after a lookup.
    std::string resolve(const std::string& section, const std::string& id) const;

private:
    Instance inst_;
    Tolerances tol_;
};

}  // namespace modkit::cli
