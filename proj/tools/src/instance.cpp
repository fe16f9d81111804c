#include "modkit_cli/instance.hpp"

#include <fstream>
#include <sstream>

#include "modkit/errors.hpp"

namespace modkit::cli {

using nlohmann::json;
using nlohmann::ordered_json;

void TolerancePatch::apply(Tolerances& t) const {
    if (rank) t.rank = *rank;
    if (orth) t.orth = *orth;
    if (eq) t.eq = *eq;
    if (psd) t.psd = *psd;
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, "missing field \"" + key + "\"");
    return *it;
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : keys) known = known || it.key() == k;
        if (!known) fail(where, "unknown field \"" + it.key() + "\"");
    }
}

Index nonneg_int(const json& v, const std::string& where) {
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(where, "expected a nonnegative integer");
    return static_cast<Index>(v.get<long long>());
}

std::string id_string(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where, "expected an identifier string");
    return v.get<std::string>();
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
}

CMatrix parse_matrix(const json& v, const std::string& where) {
    if (!v.is_object()) fail(where, "a matrix must be an object with rows, cols and data");
    only_keys(v, {"rows", "cols", "data"}, where);
    const Index rows = nonneg_int(field(v, "rows", where), where + ".rows");
    const Index cols = nonneg_int(field(v, "cols", where), where + ".cols");
    const json& data = field(v, "data", where);
    if (!data.is_array() || static_cast<Index>(data.size()) != rows) {
        fail(where + ".data", "expected " + std::to_string(rows) + " rows");
    }
    CMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const json& row = data[static_cast<std::size_t>(i)];
        const std::string rw = where + ".data[" + std::to_string(i) + "]";
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
            fail(rw, "expected " + std::to_string(cols) + " entries");
        }
        for (Index j = 0; j < cols; ++j) {
            const json& e = row[static_cast<std::size_t>(j)];
            const std::string ew = rw + "[" + std::to_string(j) + "]";
            if (!e.is_array() || e.size() != 2) fail(ew, "a complex entry must be a [re, im] pair");
            m(i, j) = Complex(number(e[0], ew), number(e[1], ew));
        }
    }
    return m;
}

std::vector<CMatrix> parse_matrix_list(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected a list of matrices");
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(parse_matrix(v[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n';
    return line;
}

ordered_json list_to_json(const std::vector<CMatrix>& ms) {
    ordered_json out = ordered_json::array();
    for (const auto& m : ms) out.push_back(matrix_to_json(m));
    return out;
}

template <class Map>
const typename Map::mapped_type& lookup(const Map& map, const std::string& section,
                                        const std::string& id) {
    auto it = map.find(id);
    if (it == map.end()) fail(section, "unknown identifier \"" + id + "\"");
    return it->second;
}

void require_count(const std::vector<CMatrix>& ms, Index count, const std::string& where) {
    if (static_cast<Index>(ms.size()) != count) {
        fail(where, "expected " + std::to_string(count) + " matrices (one per matrix unit), found " +
                        std::to_string(ms.size()));
    }
}

void require_shape(const CMatrix& m, Index rows, Index cols, const std::string& where) {
    if (m.rows() != rows || m.cols() != cols) {
        fail(where, "expected a " + std::to_string(rows) + "x" + std::to_string(cols) +
                        " matrix, found " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

}  // namespace

Instance parse_instance(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::ostringstream os;
        os << "line " << line_of(text, e.byte) << ": invalid JSON (" << e.what() << ")";
        throw ParseError(os.str());
    }
    if (!root.is_object()) fail("instance", "top level must be an object");
    only_keys(root, {"version", "tolerances", "algebras", "modules", "correspondences", "representations"},
              "instance");

    Instance inst;
    if (root.contains("version")) {
        if (!root["version"].is_string()) fail("version", "expected a string");
        inst.version = root["version"].get<std::string>();
    }
    if (root.contains("tolerances")) {
        const json& t = root["tolerances"];
        if (!t.is_object()) fail("tolerances", "expected an object");
        only_keys(t, {"rank", "orth", "eq", "psd"}, "tolerances");
        if (t.contains("rank")) inst.tolerances.rank = number(t["rank"], "tolerances.rank");
        if (t.contains("orth")) inst.tolerances.orth = number(t["orth"], "tolerances.orth");
        if (t.contains("eq")) inst.tolerances.eq = number(t["eq"], "tolerances.eq");
        if (t.contains("psd")) inst.tolerances.psd = number(t["psd"], "tolerances.psd");
    }
    auto section = [&](const char* name) -> const json* {
        if (!root.contains(name)) return nullptr;
        const json& s = root[name];
        if (!s.is_object()) fail(name, "expected an object keyed by identifier");
        return &s;
    };

    if (const json* s = section("algebras")) {
        for (auto it = s->begin(); it != s->end(); ++it) {
            const std::string where = "algebras." + it.key();
            if (!it->is_object()) fail(where, "expected an object");
            only_keys(*it, {"blocks", "embedding"}, where);
            AlgebraSpec a;
            const json& blocks = field(*it, "blocks", where);
            if (!blocks.is_array() || blocks.empty()) fail(where + ".blocks", "expected a nonempty list");
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                const Index n = nonneg_int(blocks[b], where + ".blocks[" + std::to_string(b) + "]");
                if (n == 0) fail(where + ".blocks", "block sizes must be positive");
                a.blocks.push_back(n);
            }
            if (it->contains("embedding")) a.embedding = parse_matrix_list((*it)["embedding"], where + ".embedding");
            inst.algebras.emplace(it.key(), std::move(a));
        }
    }
    if (const json* s = section("modules")) {
        for (auto it = s->begin(); it != s->end(); ++it) {
            const std::string where = "modules." + it.key();
            if (!it->is_object()) fail(where, "expected an object");
            only_keys(*it, {"H0", "H1", "span", "algebra"}, where);
            ModuleSpec m;
            m.h0 = nonneg_int(field(*it, "H0", where), where + ".H0");
            m.h1 = nonneg_int(field(*it, "H1", where), where + ".H1");
            m.span = parse_matrix_list(field(*it, "span", where), where + ".span");
            m.algebra = id_string(field(*it, "algebra", where), where + ".algebra");
            inst.modules.emplace(it.key(), std::move(m));
        }
    }
    if (const json* s = section("correspondences")) {
        for (auto it = s->begin(); it != s->end(); ++it) {
            const std::string where = "correspondences." + it.key();
            if (!it->is_object()) fail(where, "expected an object");
            only_keys(*it, {"module", "left_algebra", "phi", "phi_left"}, where);
            CorrespondenceSpec c;
            c.module = id_string(field(*it, "module", where), where + ".module");
            c.left_algebra = id_string(field(*it, "left_algebra", where), where + ".left_algebra");
            if (it->contains("phi")) c.phi = parse_matrix_list((*it)["phi"], where + ".phi");
            if (it->contains("phi_left")) c.phi_left = parse_matrix_list((*it)["phi_left"], where + ".phi_left");
            if (c.phi.has_value() == c.phi_left.has_value()) {
                fail(where, "exactly one of \"phi\" and \"phi_left\" is required");
            }
            inst.correspondences.emplace(it.key(), std::move(c));
        }
    }
    if (const json* s = section("representations")) {
        for (auto it = s->begin(); it != s->end(); ++it) {
            const std::string where = "representations." + it.key();
            if (!it->is_object()) fail(where, "expected an object");
            only_keys(*it, {"algebra", "rho"}, where);
            RepresentationSpec r;
            r.algebra = id_string(field(*it, "algebra", where), where + ".algebra");
            r.rho = parse_matrix_list(field(*it, "rho", where), where + ".rho");
            inst.representations.emplace(it.key(), std::move(r));
        }
    }

    // Cross-references and declared shapes.
    for (const auto& [id, a] : inst.algebras) {
        if (!a.embedding) continue;
        const BlockStructure s(a.blocks);
        const std::string where = "algebras." + id + ".embedding";
        require_count(*a.embedding, s.dim(), where);
        const Index n = a.embedding->front().rows();
        for (const auto& m : *a.embedding) require_shape(m, n, n, where);
    }
    for (const auto& [id, m] : inst.modules) {
        const std::string where = "modules." + id;
        lookup(inst.algebras, where + ".algebra", m.algebra);
        for (std::size_t i = 0; i < m.span.size(); ++i) {
            require_shape(m.span[i], m.h1, m.h0, where + ".span[" + std::to_string(i) + "]");
        }
    }
    for (const auto& [id, c] : inst.correspondences) {
        const std::string where = "correspondences." + id;
        const ModuleSpec& m = lookup(inst.modules, where + ".module", c.module);
        const AlgebraSpec& a = lookup(inst.algebras, where + ".left_algebra", c.left_algebra);
        const Index count = BlockStructure(a.blocks).dim();
        if (c.phi) {
            require_count(*c.phi, count, where + ".phi");
            const Index s = static_cast<Index>(m.span.size());
            for (const auto& p : *c.phi) require_shape(p, s, s, where + ".phi");
        } else {
            require_count(*c.phi_left, count, where + ".phi_left");
            for (const auto& p : *c.phi_left) require_shape(p, m.h1, m.h1, where + ".phi_left");
        }
    }
    for (const auto& [id, r] : inst.representations) {
        const std::string where = "representations." + id;
        const AlgebraSpec& a = lookup(inst.algebras, where + ".algebra", r.algebra);
        require_count(r.rho, BlockStructure(a.blocks).dim(), where + ".rho");
        const Index n = r.rho.front().rows();
        for (const auto& m : r.rho) require_shape(m, n, n, where + ".rho");
    }
    return inst;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

ordered_json matrix_to_json(const CMatrix& m) {
    ordered_json data = ordered_json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        data.push_back(std::move(row));
    }
    ordered_json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    out["data"] = std::move(data);
    return out;
}

ordered_json instance_to_json(const Instance& inst) {
    ordered_json root;
    root["version"] = inst.version;
    if (!inst.tolerances.empty()) {
        ordered_json t = ordered_json::object();
        if (inst.tolerances.rank) t["rank"] = *inst.tolerances.rank;
        if (inst.tolerances.orth) t["orth"] = *inst.tolerances.orth;
        if (inst.tolerances.eq) t["eq"] = *inst.tolerances.eq;
        if (inst.tolerances.psd) t["psd"] = *inst.tolerances.psd;
        root["tolerances"] = std::move(t);
    }
    ordered_json algebras = ordered_json::object();
    for (const auto& [id, a] : inst.algebras) {
        ordered_json o;
        o["blocks"] = a.blocks;
        if (a.embedding) o["embedding"] = list_to_json(*a.embedding);
        algebras[id] = std::move(o);
    }
    root["algebras"] = std::move(algebras);
    ordered_json modules = ordered_json::object();
    for (const auto& [id, m] : inst.modules) {
        ordered_json o;
        o["H0"] = m.h0;
        o["H1"] = m.h1;
        o["algebra"] = m.algebra;
        o["span"] = list_to_json(m.span);
        modules[id] = std::move(o);
    }
    root["modules"] = std::move(modules);
    ordered_json corrs = ordered_json::object();
    for (const auto& [id, c] : inst.correspondences) {
        ordered_json o;
        o["module"] = c.module;
        o["left_algebra"] = c.left_algebra;
        if (c.phi) o["phi"] = list_to_json(*c.phi);
        if (c.phi_left) o["phi_left"] = list_to_json(*c.phi_left);
        corrs[id] = std::move(o);
    }
    root["correspondences"] = std::move(corrs);
    ordered_json reps = ordered_json::object();
    for (const auto& [id, r] : inst.representations) {
        ordered_json o;
        o["algebra"] = r.algebra;
        o["rho"] = list_to_json(r.rho);
        reps[id] = std::move(o);
    }
    root["representations"] = std::move(reps);
    return root;
}

std::string serialize_instance(const Instance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

Workspace::Workspace(Instance inst, Tolerances tol) : inst_(std::move(inst)), tol_(tol) {
    tol_.validate();
}

std::string Workspace::resolve(const std::string& section, const std::string& id) const {
    auto pick = [&](const auto& map) -> std::string {
        if (id.empty()) {
            if (map.size() != 1) fail(section, "an identifier is required (the section has " +
                                                   std::to_string(map.size()) + " entries)");
            return map.begin()->first;
        }
        lookup(map, section, id);
        return id;
    };
    if (section == "algebras") return pick(inst_.algebras);
    if (section == "modules") return pick(inst_.modules);
    if (section == "correspondences") return pick(inst_.correspondences);
    if (section == "representations") return pick(inst_.representations);
    fail(section, "unknown section");
}

CStarAlgebra Workspace::algebra(const std::string& id) const {
    const AlgebraSpec& a = lookup(inst_.algebras, "algebras", id);
    BlockStructure s(a.blocks);
    if (!a.embedding) {
        return CStarAlgebra(standard_representation(s), tol_);
    }
    const Index n = a.embedding->front().rows();
    return CStarAlgebra(Representation(std::move(s), *a.embedding, n, n), tol_);
}

OperatorSubspace Workspace::module_space(const std::string& id) const {
    const ModuleSpec& m = lookup(inst_.modules, "modules", id);
    return hs_orthonormalize(m.span, m.h1, m.h0, tol_);
}

ConcreteModule Workspace::module(const std::string& id) const {
    const ModuleSpec& m = lookup(inst_.modules, "modules", id);
    return ConcreteModule(module_space(id), algebra(m.algebra), tol_);
}

StarHomomorphism Workspace::phi(const std::string& id) const {
    const CorrespondenceSpec& c = lookup(inst_.correspondences, "correspondences", id);
    const ModuleSpec& ms = lookup(inst_.modules, "modules", c.module);
    const CStarAlgebra left = algebra(c.left_algebra);
    if (c.phi_left) {
        const ConcreteModule m = module(c.module);
        return phi_from_operators(m, left, *c.phi_left);
    }
    // Coordinates on the listed span S; with S = Q R for the orthonormal basis Q,
    // the map in Q-coordinates is R P R^{-1}.
    const OperatorSubspace q = module_space(c.module);
    const Index s = static_cast<Index>(ms.span.size());
    if (q.dim() != s) {
        fail("correspondences." + id + ".phi", "coordinates need a linearly independent span");
    }
    CMatrix r(s, s);
    for (Index j = 0; j < s; ++j) r.col(j) = q.coordinates(ms.span[static_cast<std::size_t>(j)]);
    // M R = R P, solved as R* M* = (R P)*.
    const auto lu = CMatrix(r.adjoint()).partialPivLu();
    std::vector<CMatrix> images;
    for (const auto& p : *c.phi) {
        const CMatrix rp = r * p;
        images.push_back(lu.solve(rp.adjoint()).adjoint());
    }
    return StarHomomorphism(left.structure(), std::move(images), s, s);
}

Correspondence Workspace::correspondence(const std::string& id) const {
    const CorrespondenceSpec& c = lookup(inst_.correspondences, "correspondences", id);
    return Correspondence(module(c.module), algebra(c.left_algebra), phi(id));
}

Representation Workspace::representation(const std::string& id) const {
    const RepresentationSpec& r = lookup(inst_.representations, "representations", id);
    const AlgebraSpec& a = lookup(inst_.algebras, "algebras", r.algebra);
    const Index n = r.rho.front().rows();
    return Representation(BlockStructure(a.blocks), r.rho, n, n);
}

}  // namespace modkit::cli
