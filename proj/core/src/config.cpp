#include "gplab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace gplab {

namespace {

using json = nlohmann::json;

struct Location {
    std::size_t line = 0;
    std::size_t column = 0;
};

Location location_of(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    Location loc{1, 1};
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') {
            ++loc.line;
            loc.column = 1;
        } else {
            ++loc.column;
        }
    }
    return loc;
}

std::vector<std::string> split_pointer(const std::string& pointer) {
    std::vector<std::string> parts;
    std::size_t start = 1;
    while (start <= pointer.size()) {
        const auto end = pointer.find('/', start);
        parts.push_back(pointer.substr(start, end - start));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return parts;
}

bool is_index(const std::string& token) {
    return !token.empty() && std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

/// Best-effort source position of a JSON pointer: follows the object keys in
/// order through the text. Array positions resolve to their enclosing key.
Location locate(std::string_view text, const std::string& pointer) {
    std::size_t pos = 0;
    bool found = false;
    for (const auto& token : split_pointer(pointer)) {
        if (token.empty() || is_index(token)) continue;
        const std::string quoted = "\"" + token + "\"";
        for (auto at = text.find(quoted, pos); at != std::string_view::npos; at = text.find(quoted, at + 1)) {
            auto next = text.find_first_not_of(" \t\r\n", at + quoted.size());
            if (next != std::string_view::npos && text[next] == ':') {
                pos = at;
                found = true;
                break;
            }
        }
    }
    return found ? location_of(text, pos) : Location{};
}

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
        const auto loc = locate(text_, pointer);
        throw ConfigError((pointer.empty() ? "/" : pointer) + ": " + message, loc.line, loc.column);
    }

    void only_keys(const json& node, const std::string& pointer, std::initializer_list<const char*> keys) const {
        if (!node.is_object()) fail(pointer, "expected an object");
        for (const auto& [key, value] : node.items()) {
            if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
                fail(pointer + "/" + key, "unknown key");
        }
    }

    const json& required(const json& node, const std::string& pointer, const char* key) const {
        auto it = node.find(key);
        if (it == node.end()) fail(pointer, std::string("missing key '") + key + "'");
        return *it;
    }

    double number(const json& node, const std::string& pointer) const {
        if (!node.is_number()) fail(pointer, "expected a number");
        return node.get<double>();
    }

    double positive(const json& node, const std::string& pointer) const {
        const double x = number(node, pointer);
        if (!(x > 0.0) || !std::isfinite(x)) fail(pointer, "expected a positive finite number");
        return x;
    }

    std::uint64_t unsigned_integer(const json& node, const std::string& pointer) const {
        if (!node.is_number_unsigned()) fail(pointer, "expected a non-negative integer");
        return node.get<std::uint64_t>();
    }

    std::string string(const json& node, const std::string& pointer) const {
        if (!node.is_string()) fail(pointer, "expected a string");
        return node.get<std::string>();
    }

    template <class T, class F>
    void optional(const json& node, const std::string& pointer, const char* key, T& out, F read) const {
        if (auto it = node.find(key); it != node.end()) out = (this->*read)(*it, pointer + "/" + key);
    }

    std::vector<std::string> names(const json& node, const std::string& pointer) const {
        if (!node.is_array()) fail(pointer, "expected an array of vertex names");
        std::vector<std::string> out;
        for (std::size_t i = 0; i < node.size(); ++i) out.push_back(string(node[i], pointer + "/" + std::to_string(i)));
        return out;
    }

    CMatrix matrix(const json& node, const std::string& pointer, std::size_t dim) const {
        if (!node.is_array() || node.size() != dim) fail(pointer, "expected " + std::to_string(dim) + " rows");
        CMatrix m(dim, dim);
        for (std::size_t r = 0; r < dim; ++r) {
            const auto row_ptr = pointer + "/" + std::to_string(r);
            const auto& row = node[r];
            if (!row.is_array() || row.size() != dim) fail(row_ptr, "expected " + std::to_string(dim) + " entries");
            for (std::size_t c = 0; c < dim; ++c) {
                const auto& z = row[c];
                const auto z_ptr = row_ptr + "/" + std::to_string(c);
                if (!z.is_array() || z.size() != 2) fail(z_ptr, "expected a [re, im] pair");
                m(r, c) = Complex(number(z[0], z_ptr + "/0"), number(z[1], z_ptr + "/1"));
            }
        }
        return m;
    }

    std::vector<CMatrix> block_matrices(const json& node, const std::string& pointer,
                                        const FiniteDimAlgebra& alg) const {
        if (!node.is_array() || node.size() != alg.block_count())
            fail(pointer, "expected one matrix per block (" + std::to_string(alg.block_count()) + ")");
        std::vector<CMatrix> out;
        for (std::size_t k = 0; k < alg.block_count(); ++k)
            out.push_back(matrix(node[k], pointer + "/" + std::to_string(k), alg.blocks[k]));
        return out;
    }

private:
    std::string_view text_;
};

VertexSpec read_vertex(const Reader& in, const json& node, const std::string& pointer) {
    if (node.is_object() && node.contains("hecke")) {
        in.only_keys(node, pointer, {"hecke"});
        const auto& h = node["hecke"];
        in.only_keys(h, pointer + "/hecke", {"q"});
        return VertexSpec::hecke(in.positive(in.required(h, pointer + "/hecke", "q"), pointer + "/hecke/q"));
    }
    in.only_keys(node, pointer, {"blocks", "density", "witnesses"});
    VertexSpec spec;
    const auto& blocks = in.required(node, pointer, "blocks");
    if (!blocks.is_array() || blocks.empty()) in.fail(pointer + "/blocks", "expected a non-empty array of block sizes");
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const auto d = in.unsigned_integer(blocks[k], pointer + "/blocks/" + std::to_string(k));
        if (d == 0) in.fail(pointer + "/blocks/" + std::to_string(k), "block size must be positive");
        spec.algebra.blocks.push_back(d);
    }
    if (auto it = node.find("density"); it != node.end()) {
        spec.state.densities = in.block_matrices(*it, pointer + "/density", spec.algebra);
    } else {
        spec.state = StateSpec::normalized_trace(spec.algebra);
    }
    try {
        spec.state.validate(spec.algebra);
    } catch (const DomainError& e) {
        in.fail(pointer + "/density", e.what());
    }
    if (!spec.state.is_faithful()) in.fail(pointer + "/density", "the state is not faithful");
    if (auto it = node.find("witnesses"); it != node.end()) {
        const auto wp = pointer + "/witnesses";
        in.only_keys(*it, wp, {"a", "unitary"});
        if (auto a = it->find("a"); a != it->end())
            spec.a_witness = AlgebraElement{in.block_matrices(*a, wp + "/a", spec.algebra)};
        if (auto u = it->find("unitary"); u != it->end()) {
            spec.unitary_witness = AlgebraElement{in.block_matrices(*u, wp + "/unitary", spec.algebra)};
            if (!is_unitary(*spec.unitary_witness)) in.fail(wp + "/unitary", "not unitary");
        }
    }
    return spec;
}

json matrix_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

json blocks_json(const std::vector<CMatrix>& blocks) {
    json out = json::array();
    for (const auto& m : blocks) out.push_back(matrix_json(m));
    return out;
}

json vertex_json(const VertexSpec& spec) {
    if (spec.hecke_q) return {{"hecke", {{"q", *spec.hecke_q}}}};
    json out{{"blocks", spec.algebra.blocks}, {"density", blocks_json(spec.state.densities)}};
    if (spec.a_witness || spec.unitary_witness) {
        json w = json::object();
        if (spec.a_witness) w["a"] = blocks_json(spec.a_witness->blocks);
        if (spec.unitary_witness) w["unitary"] = blocks_json(spec.unitary_witness->blocks);
        out["witnesses"] = std::move(w);
    }
    return out;
}

}  // namespace

ConfigError::ConfigError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(line == 0 ? message
                                   : "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                                         message),
      line_(line),
      column_(column) {}

ProblemConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto loc = location_of(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError(std::string("syntax error: ") + e.what(), loc.line, loc.column);
    }
    const Reader in(text);
    in.only_keys(root, "",
                 {"schema_version", "graph", "vertices", "N", "seeds", "caps", "tolerances", "suite", "growth",
                  "topofree", "inject_fault"});
    const auto version = in.unsigned_integer(in.required(root, "", "schema_version"), "/schema_version");
    if (version != config_schema_version)
        in.fail("/schema_version", "unsupported schema version " + std::to_string(version));

    ProblemConfig config;
    const auto& graph = in.required(root, "", "graph");
    in.only_keys(graph, "/graph", {"vertices", "edges"});
    auto vertex_names = in.names(in.required(graph, "/graph", "vertices"), "/graph/vertices");
    std::vector<std::pair<std::string, std::string>> edges;
    if (auto it = graph.find("edges"); it != graph.end()) {
        if (!it->is_array()) in.fail("/graph/edges", "expected an array of [u, v] pairs");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto ptr = "/graph/edges/" + std::to_string(i);
            auto pair = in.names((*it)[i], ptr);
            if (pair.size() != 2) in.fail(ptr, "expected a [u, v] pair");
            edges.emplace_back(pair[0], pair[1]);
        }
    }
    try {
        config.problem.graph = SimplicialGraph(vertex_names, edges);
    } catch (const std::invalid_argument& e) {
        in.fail("/graph", e.what());
    }

    const auto& vertices = in.required(root, "", "vertices");
    if (!vertices.is_object()) in.fail("/vertices", "expected an object keyed by vertex name");
    for (const auto& [name, value] : vertices.items())
        if (!config.problem.graph.find(name)) in.fail("/vertices/" + name, "not a vertex of the graph");
    for (const auto& name : vertex_names) {
        auto it = vertices.find(name);
        if (it == vertices.end()) in.fail("/vertices", "no algebra given for vertex '" + name + "'");
        config.problem.vertices.push_back(read_vertex(in, *it, "/vertices/" + name));
    }
    try {
        config.problem.validate();
    } catch (const DomainError& e) {
        in.fail("/vertices", e.what());
    }

    if (auto it = root.find("N"); it != root.end()) config.depth = in.unsigned_integer(*it, "/N");

    if (auto it = root.find("seeds"); it != root.end()) {
        in.only_keys(*it, "/seeds", {"identities", "probe"});
        in.optional(*it, "/seeds", "identities", config.seeds.identities, &Reader::unsigned_integer);
        in.optional(*it, "/seeds", "probe", config.seeds.probe, &Reader::unsigned_integer);
    }
    if (auto it = root.find("caps"); it != root.end()) {
        in.only_keys(*it, "/caps", {"fock_dimension", "ball_size", "expression_length", "check_seconds"});
        in.optional(*it, "/caps", "fock_dimension", config.caps.fock_dimension, &Reader::unsigned_integer);
        in.optional(*it, "/caps", "ball_size", config.caps.ball_size, &Reader::unsigned_integer);
        in.optional(*it, "/caps", "expression_length", config.caps.expression_length, &Reader::unsigned_integer);
        in.optional(*it, "/caps", "check_seconds", config.caps.check_seconds, &Reader::positive);
    }
    if (auto it = root.find("tolerances"); it != root.end()) {
        in.only_keys(*it, "/tolerances",
                     {"identities", "tensor_split", "growth", "witness", "tracial", "violation"});
        auto& t = config.tolerances;
        in.optional(*it, "/tolerances", "identities", t.identities, &Reader::positive);
        in.optional(*it, "/tolerances", "tensor_split", t.tensor_split, &Reader::positive);
        in.optional(*it, "/tolerances", "growth", t.growth, &Reader::positive);
        in.optional(*it, "/tolerances", "witness", t.witness, &Reader::positive);
        in.optional(*it, "/tolerances", "tracial", t.tracial, &Reader::positive);
        in.optional(*it, "/tolerances", "violation", t.violation, &Reader::positive);
    }
    if (auto it = root.find("suite"); it != root.end()) {
        in.only_keys(*it, "/suite", {"draws", "expressions", "max_expression_length"});
        in.optional(*it, "/suite", "draws", config.suite.draws, &Reader::unsigned_integer);
        in.optional(*it, "/suite", "expressions", config.suite.expressions, &Reader::unsigned_integer);
        in.optional(*it, "/suite", "max_expression_length", config.suite.max_expression_length,
                    &Reader::unsigned_integer);
    }
    if (auto it = root.find("growth"); it != root.end()) {
        in.only_keys(*it, "/growth", {"depth", "q"});
        in.optional(*it, "/growth", "depth", config.growth.depth, &Reader::unsigned_integer);
        if (auto q = it->find("q"); q != it->end()) {
            if (!q->is_object()) in.fail("/growth/q", "expected an object keyed by vertex name");
            std::vector<double> values;
            for (const auto& name : vertex_names) {
                auto v = q->find(name);
                if (v == q->end()) in.fail("/growth/q", "no parameter for vertex '" + name + "'");
                values.push_back(in.positive(*v, "/growth/q/" + name));
            }
            if (q->size() != values.size()) in.fail("/growth/q", "parameters for unknown vertices");
            config.growth.q = std::move(values);
        }
    }
    if (auto it = root.find("topofree"); it != root.end()) {
        in.only_keys(*it, "/topofree", {"w", "S", "search_radius", "max_power"});
        const CoxeterGroup grp(config.problem.graph);
        auto word = [&](const json& node, const std::string& ptr) {
            auto letters = in.names(node, ptr);
            try {
                grp.parse(letters);
            } catch (const std::invalid_argument& e) {
                in.fail(ptr, e.what());
            }
            return letters;
        };
        if (auto w = it->find("w"); w != it->end()) config.topofree.w = word(*w, "/topofree/w");
        if (auto s = it->find("S"); s != it->end()) {
            if (!s->is_array()) in.fail("/topofree/S", "expected an array of words");
            std::vector<std::vector<std::string>> words;
            for (std::size_t i = 0; i < s->size(); ++i)
                words.push_back(word((*s)[i], "/topofree/S/" + std::to_string(i)));
            config.topofree.s = std::move(words);
        }
        in.optional(*it, "/topofree", "search_radius", config.topofree.search_radius, &Reader::unsigned_integer);
        in.optional(*it, "/topofree", "max_power", config.topofree.max_power, &Reader::unsigned_integer);
    }
    if (auto it = root.find("inject_fault"); it != root.end()) {
        const auto fault = in.string(*it, "/inject_fault");
        if (fault == "rewrite-contraction") {
            config.fault = SuiteFault::RewriteContraction;
        } else if (fault != "none") {
            in.fail("/inject_fault", "unknown fault '" + fault + "' (expected none or rewrite-contraction)");
        }
    }
    return config;
}

std::string echo_config(const ProblemConfig& config) {
    const auto& g = config.problem.graph;
    json edges = json::array();
    for (const auto& [u, v] : g.edges()) edges.push_back({g.name(u), g.name(v)});
    json vertices = json::object();
    for (std::size_t i = 0; i < g.size(); ++i) vertices[g.names()[i]] = vertex_json(config.problem.vertices[i]);

    json growth{{"depth", config.growth.depth}};
    if (config.growth.q) {
        json q = json::object();
        for (std::size_t i = 0; i < g.size(); ++i) q[g.names()[i]] = (*config.growth.q)[i];
        growth["q"] = std::move(q);
    }
    json topofree{{"w", config.topofree.w},
                  {"search_radius", config.topofree.search_radius},
                  {"max_power", config.topofree.max_power}};
    if (config.topofree.s) topofree["S"] = *config.topofree.s;

    const auto& t = config.tolerances;
    json root{
        {"schema_version", config_schema_version},
        {"graph", {{"vertices", g.names()}, {"edges", std::move(edges)}}},
        {"vertices", std::move(vertices)},
        {"N", config.depth},
        {"seeds", {{"identities", config.seeds.identities}, {"probe", config.seeds.probe}}},
        {"caps",
         {{"fock_dimension", config.caps.fock_dimension},
          {"ball_size", config.caps.ball_size},
          {"expression_length", config.caps.expression_length},
          {"check_seconds", config.caps.check_seconds}}},
        {"tolerances",
         {{"identities", t.identities},
          {"tensor_split", t.tensor_split},
          {"growth", t.growth},
          {"witness", t.witness},
          {"tracial", t.tracial},
          {"violation", t.violation}}},
        {"suite",
         {{"draws", config.suite.draws},
          {"expressions", config.suite.expressions},
          {"max_expression_length", config.suite.max_expression_length}}},
        {"growth", std::move(growth)},
        {"topofree", std::move(topofree)},
        {"inject_fault", config.fault == SuiteFault::RewriteContraction ? "rewrite-contraction" : "none"},
    };
    return root.dump(2);
}

std::string content_hash(std::string_view text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace gplab
