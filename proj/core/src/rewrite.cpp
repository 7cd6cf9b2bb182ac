#include "gplab/rewrite.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <sstream>

namespace gplab {

namespace {

enum class Kind { Create = 0, Diag = 1, Annihilate = 2 };

struct Sym {
    Kind kind;
    VertexId vertex;
    CMatrix x;
};

struct Draft {
    Complex coefficient{1.0, 0.0};
    std::vector<Sym> syms;
};

struct Choice {
    Complex coefficient;
    std::optional<Sym> sym;
};

CMatrix unit_of(const CMatrix& x) { return CMatrix::Identity(x.rows(), x.cols()); }

std::vector<Choice> expand(const Generator& gen, const ElementTable& table) {
    if (gen.kind == GeneratorKind::Scalar) return {{gen.scalar, std::nullopt}};
    const VertexId v = gen.vertex;
    if (gen.kind == GeneratorKind::Projection) {
        if (v.index >= table.vertex_dims.size()) throw DomainError("element table lacks the GNS dimension of a vertex");
        const auto d = static_cast<Eigen::Index>(table.vertex_dims[v.index]);
        return {{1.0, Sym{Kind::Diag, v, CMatrix::Identity(d, d)}}};
    }
    const CMatrix& a = table.at(v, gen.element);
    switch (gen.kind) {
    case GeneratorKind::Creation: return {{1.0, Sym{Kind::Create, v, centered_matrix(a)}}};
    case GeneratorKind::Diagonal: return {{1.0, Sym{Kind::Diag, v, a}}};
    case GeneratorKind::Annihilation: return {{1.0, Sym{Kind::Annihilate, v, centered_matrix(a)}}};
    default: break;
    }
    // a = d(a) + (a^o)^dagger + (((a^*)^o)^dagger)^* + omega(a) Q_v^perp, Q_v^perp = 1 - d(1).
    const Complex w = a(0, 0);
    return {{1.0, Sym{Kind::Diag, v, a}},
            {1.0, Sym{Kind::Create, v, centered_matrix(a)}},
            {1.0, Sym{Kind::Annihilate, v, centered_matrix(a.adjoint())}},
            {w, std::nullopt},
            {-w, Sym{Kind::Diag, v, unit_of(a)}}};
}

class Normalizer {
public:
    Normalizer(const CoxeterGroup& grp, const RewriteLimits& limits) : grp_(grp), limits_(limits) {}

    std::vector<Draft> run(std::vector<Draft> input) {
        std::deque<Draft> work(std::make_move_iterator(input.begin()), std::make_move_iterator(input.end()));
        std::vector<Draft> done;
        while (!work.empty()) {
            if (++steps_ > limits_.max_steps)
                throw ResourceError("rewrite exceeded " + std::to_string(limits_.max_steps) + " steps");
            Draft d = std::move(work.front());
            work.pop_front();
            if (negligible(d)) continue;
            if (auto i = first_unsorted(d)) {
                for (auto& next : swap_rule(d, *i)) work.push_back(std::move(next));
                continue;
            }
            auto [begin, end] = diag_run(d);
            if (!diag_run_is_clique(d, begin, end)) continue;
            std::stable_sort(d.syms.begin() + static_cast<std::ptrdiff_t>(begin),
                             d.syms.begin() + static_cast<std::ptrdiff_t>(end),
                             [](const Sym& a, const Sym& b) { return a.vertex < b.vertex; });
            bool merged = false;
            for (std::size_t i = begin; i + 1 < end; ++i) {
                if (d.syms[i].vertex != d.syms[i + 1].vertex) continue;
                for (auto& next : merge_diagonals(d, i)) work.push_back(std::move(next));
                merged = true;
                break;
            }
            if (merged) continue;
            if (!runs_reduced(d, begin, end)) continue;
            done.push_back(std::move(d));
        }
        return done;
    }

private:
    bool negligible(const Draft& d) const {
        if (std::abs(d.coefficient) <= limits_.zero_tolerance) return true;
        return std::any_of(d.syms.begin(), d.syms.end(),
                           [&](const Sym& s) { return s.x.norm() <= limits_.zero_tolerance; });
    }

    static std::optional<std::size_t> first_unsorted(const Draft& d) {
        for (std::size_t i = 0; i + 1 < d.syms.size(); ++i)
            if (static_cast<int>(d.syms[i].kind) > static_cast<int>(d.syms[i + 1].kind)) return i;
        return std::nullopt;
    }

    std::vector<Draft> swap_rule(const Draft& d, std::size_t i) const {
        const Sym& left = d.syms[i];
        const Sym& right = d.syms[i + 1];
        const SimplicialGraph& g = grp_.graph();
        if (left.vertex != right.vertex) {
            if (!g.adjacent(left.vertex, right.vertex)) return {};
            Draft out = d;
            std::swap(out.syms[i], out.syms[i + 1]);
            return {out};
        }
        const VertexId v = left.vertex;
        auto replaced = [&](std::vector<Sym> middle) {
            Draft out;
            out.coefficient = d.coefficient;
            out.syms.assign(d.syms.begin(), d.syms.begin() + static_cast<std::ptrdiff_t>(i));
            out.syms.insert(out.syms.end(), middle.begin(), middle.end());
            out.syms.insert(out.syms.end(), d.syms.begin() + static_cast<std::ptrdiff_t>(i + 2), d.syms.end());
            return out;
        };
        if (left.kind == Kind::Diag && right.kind == Kind::Create)
            return {replaced({Sym{Kind::Create, v, centered_matrix(left.x * right.x)}})};
        if (left.kind == Kind::Annihilate && right.kind == Kind::Diag)
            return {replaced({Sym{Kind::Annihilate, v, centered_matrix(right.x.adjoint() * left.x)}})};
        // (a^dagger)^* b^dagger = omega(a^* b) Q_v^perp for centered a, b.
        const Complex w = (left.x.adjoint() * right.x)(0, 0);
        Draft keep = replaced({});
        keep.coefficient *= w;
        Draft minus = replaced({Sym{Kind::Diag, v, unit_of(left.x)}});
        minus.coefficient *= limits_.corrupt_contraction ? w : -w;
        return {keep, minus};
    }

    static std::pair<std::size_t, std::size_t> diag_run(const Draft& d) {
        std::size_t begin = 0;
        while (begin < d.syms.size() && d.syms[begin].kind == Kind::Create) ++begin;
        std::size_t end = begin;
        while (end < d.syms.size() && d.syms[end].kind == Kind::Diag) ++end;
        return {begin, end};
    }

    bool diag_run_is_clique(const Draft& d, std::size_t begin, std::size_t end) const {
        for (std::size_t i = begin; i < end; ++i)
            for (std::size_t j = i + 1; j < end; ++j) {
                VertexId a = d.syms[i].vertex;
                VertexId b = d.syms[j].vertex;
                if (a != b && !grp_.graph().adjacent(a, b)) return false;
            }
        return true;
    }

    // d(a) d(b) = d(ab) - (a^o)^dagger (((b^*)^o)^dagger)^*.
    static std::vector<Draft> merge_diagonals(const Draft& d, std::size_t i) {
        const Sym& a = d.syms[i];
        const Sym& b = d.syms[i + 1];
        auto with = [&](std::vector<Sym> middle, Complex c) {
            Draft out;
            out.coefficient = c * d.coefficient;
            out.syms.assign(d.syms.begin(), d.syms.begin() + static_cast<std::ptrdiff_t>(i));
            out.syms.insert(out.syms.end(), middle.begin(), middle.end());
            out.syms.insert(out.syms.end(), d.syms.begin() + static_cast<std::ptrdiff_t>(i + 2), d.syms.end());
            return out;
        };
        return {with({Sym{Kind::Diag, a.vertex, a.x * b.x}}, 1.0),
                with({Sym{Kind::Create, a.vertex, centered_matrix(a.x)},
                      Sym{Kind::Annihilate, a.vertex, centered_matrix(b.x.adjoint())}},
                     -1.0)};
    }

    bool runs_reduced(const Draft& d, std::size_t begin, std::size_t end) const {
        Word creation;
        for (std::size_t i = 0; i < begin; ++i) creation.push_back(d.syms[i].vertex);
        Word annihilation;
        for (std::size_t i = d.syms.size(); i-- > end;) annihilation.push_back(d.syms[i].vertex);
        return grp_.is_reduced(creation) && grp_.is_reduced(annihilation);
    }

    const CoxeterGroup& grp_;
    const RewriteLimits& limits_;
    std::size_t steps_ = 0;
};

ElementaryTerm to_term(Draft d) {
    ElementaryTerm t;
    t.coefficient = d.coefficient;
    for (auto& s : d.syms) {
        Letter l{s.vertex, std::move(s.x)};
        switch (s.kind) {
        case Kind::Create: t.creations.push_back(std::move(l)); break;
        case Kind::Diag: t.diagonal.push_back(std::move(l)); break;
        case Kind::Annihilate: t.annihilations.push_back(std::move(l)); break;
        }
    }
    // The run A(x_1) ... A(x_l) equals (x_l^dagger ... x_1^dagger)^*.
    std::reverse(t.annihilations.begin(), t.annihilations.end());
    return t;
}

const char* kind_token(GeneratorKind k) {
    switch (k) {
    case GeneratorKind::Element: return "elem";
    case GeneratorKind::Creation: return "cre";
    case GeneratorKind::Diagonal: return "dia";
    case GeneratorKind::Annihilation: return "ann";
    case GeneratorKind::Projection: return "proj";
    case GeneratorKind::Scalar: return "scal";
    }
    return "?";
}

}  // namespace

const CMatrix& ElementTable::at(VertexId v, std::size_t index) const {
    if (v.index >= by_vertex.size()) throw DomainError("no elements for vertex " + std::to_string(v.index));
    const auto& list = by_vertex[v.index];
    if (index >= list.size())
        throw DomainError("element reference " + std::to_string(index) + " out of range for vertex " +
                          std::to_string(v.index));
    return list[index];
}

Expression parse_expression(const SimplicialGraph& g, std::string_view text) {
    std::istringstream in{std::string(text)};
    Expression e;
    std::string token;
    auto vertex = [&]() {
        std::string name;
        if (!(in >> name)) throw DomainError("expression ended while reading a vertex");
        auto v = g.find(name);
        if (!v) throw DomainError("unknown vertex '" + name + "' in expression");
        return *v;
    };
    auto index = [&]() {
        long long i = -1;
        if (!(in >> i) || i < 0) throw DomainError("expected a non-negative element reference");
        return static_cast<std::size_t>(i);
    };
    while (in >> token) {
        Generator gen;
        if (token == "elem" || token == "cre" || token == "dia" || token == "ann") {
            gen.kind = token == "elem"  ? GeneratorKind::Element
                       : token == "cre" ? GeneratorKind::Creation
                       : token == "dia" ? GeneratorKind::Diagonal
                                        : GeneratorKind::Annihilation;
            gen.vertex = vertex();
            gen.element = index();
        } else if (token == "proj") {
            gen.kind = GeneratorKind::Projection;
            gen.vertex = vertex();
        } else if (token == "scal") {
            double re = 0.0, im = 0.0;
            if (!(in >> re >> im)) throw DomainError("scal needs real and imaginary parts");
            gen.kind = GeneratorKind::Scalar;
            gen.scalar = {re, im};
        } else {
            throw DomainError("unknown expression token '" + token + "'");
        }
        e.factors.push_back(gen);
    }
    return e;
}

std::string format_expression(const SimplicialGraph& g, const Expression& e) {
    std::ostringstream out;
    out.precision(17);
    bool first = true;
    for (const auto& gen : e.factors) {
        if (!first) out << ' ';
        first = false;
        out << kind_token(gen.kind);
        if (gen.kind == GeneratorKind::Scalar) {
            out << ' ' << gen.scalar.real() << ' ' << gen.scalar.imag();
            continue;
        }
        out << ' ' << g.name(gen.vertex);
        if (gen.kind != GeneratorKind::Projection) out << ' ' << gen.element;
    }
    return out.str();
}

Word ElementaryTerm::creation_word() const {
    Word w;
    for (const auto& l : creations) w.push_back(l.vertex);
    return w;
}

Word ElementaryTerm::annihilation_word() const {
    Word w;
    for (const auto& l : annihilations) w.push_back(l.vertex);
    return w;
}

NormalForm signature(const CoxeterGroup& grp, const ElementaryTerm& t) {
    Word u = t.creation_word();
    Word v = t.annihilation_word();
    if (!grp.is_reduced(u)) throw DomainError("creation word " + grp.format(NormalForm{u}) + " is not reduced");
    if (!grp.is_reduced(v)) throw DomainError("annihilation word " + grp.format(NormalForm{v}) + " is not reduced");
    return grp.multiply(grp.reduce(u), grp.inverse(grp.reduce(v)));
}

OperatorMatrix materialize(const std::shared_ptr<const TruncatedFock>& f, const ElementaryTerm& t) {
    OperatorMatrix out = OperatorMatrix::identity(f);
    for (const auto& l : t.creations) out = out * creation(f, l.vertex, l.element);
    for (const auto& l : t.diagonal) out = out * diagonal(f, l.vertex, l.element);
    for (auto it = t.annihilations.rbegin(); it != t.annihilations.rend(); ++it)
        out = out * creation(f, it->vertex, it->element).adjoint();
    return t.coefficient * out;
}

OperatorMatrix materialize(const std::shared_ptr<const TruncatedFock>& f, const Expression& e, const ElementTable& table) {
    OperatorMatrix out = OperatorMatrix::identity(f);
    for (const auto& gen : e.factors) {
        switch (gen.kind) {
        case GeneratorKind::Element: out = out * lambda_op(f, gen.vertex, table.at(gen.vertex, gen.element)); break;
        case GeneratorKind::Creation: out = out * creation(f, gen.vertex, table.at(gen.vertex, gen.element)); break;
        case GeneratorKind::Diagonal: out = out * diagonal(f, gen.vertex, table.at(gen.vertex, gen.element)); break;
        case GeneratorKind::Annihilation:
            out = out * creation(f, gen.vertex, table.at(gen.vertex, gen.element)).adjoint();
            break;
        case GeneratorKind::Projection: out = out * q_projection(f, f->group().generator(gen.vertex)); break;
        case GeneratorKind::Scalar: out = gen.scalar * out; break;
        }
    }
    return out;
}

std::vector<ElementaryTerm> rewrite_to_elementary(const CoxeterGroup& grp, const Expression& e,
                                                  const ElementTable& table, RewriteLimits limits) {
    if (e.factors.size() > limits.max_length)
        throw ResourceError("expression length " + std::to_string(e.factors.size()) + " exceeds cap " +
                            std::to_string(limits.max_length));
    for (const auto& gen : e.factors)
        if (gen.kind != GeneratorKind::Scalar && gen.vertex.index >= grp.rank())
            throw DomainError("expression refers to a vertex outside the graph");
    Normalizer norm(grp, limits);
    std::vector<Draft> current{Draft{}};
    for (const auto& gen : e.factors) {
        std::vector<Draft> next;
        auto choices = expand(gen, table);
        for (const auto& d : current)
            for (const auto& c : choices) {
                Draft n = d;
                n.coefficient *= c.coefficient;
                if (c.sym) n.syms.push_back(*c.sym);
                next.push_back(std::move(n));
            }
        current = norm.run(std::move(next));
    }
    std::vector<ElementaryTerm> out;
    for (auto& d : current) out.push_back(to_term(std::move(d)));
    return out;
}

RewriteCertificate certify_rewrite(const std::shared_ptr<const TruncatedFock>& f, const Expression& e,
                                   const ElementTable& table, const std::vector<ElementaryTerm>& terms) {
    OperatorMatrix direct = materialize(f, e, table);
    OperatorMatrix sum = OperatorMatrix::zero(f);
    for (const auto& t : terms) sum = sum + materialize(f, t);
    RewriteCertificate c;
    c.deviation = guarded_deviation(direct, sum);
    c.guard = std::min(direct.guard(), sum.guard());
    c.terms = terms.size();
    return c;
}

bool is_block_diagonal(const OperatorMatrix& x, double tol) {
    const TruncatedFock& f = x.space();
    for (Eigen::Index k = 0; k < x.matrix().outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(x.matrix(), k); it; ++it) {
            auto col = static_cast<std::size_t>(it.col());
            if (static_cast<int>(f.length_at(col)) > x.guard()) continue;
            if (f.word_at(static_cast<std::size_t>(it.row())) != f.word_at(col) && std::abs(it.value()) > tol)
                return false;
        }
    return true;
}

}  // namespace gplab
