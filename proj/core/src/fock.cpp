#include "gplab/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>

namespace gplab {

namespace {

using Triplets = std::vector<Eigen::Triplet<Complex, std::int64_t>>;

SparseMatrix from_triplets(std::size_t n, const Triplets& t) {
    SparseMatrix m(static_cast<std::int64_t>(n), static_cast<std::int64_t>(n));
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

void require_same_space(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.space_ptr() != b.space_ptr()) throw DomainError("operators live on different Fock spaces");
}

void check_vertex_operator(const TruncatedFock& f, VertexId v, const CMatrix& x) {
    if (v.index >= f.graph().size()) throw GraphError("unknown vertex id " + std::to_string(v.index));
    auto d = static_cast<Eigen::Index>(f.vertex_dim(v));
    if (x.rows() != d || x.cols() != d)
        throw DomainError("operator for vertex " + f.graph().name(v) + " must be " + std::to_string(d) + "x" +
                          std::to_string(d));
}

template <class T>
std::vector<T> permuted(const std::vector<T>& xs, const std::vector<std::size_t>& order) {
    std::vector<T> out;
    out.reserve(xs.size());
    for (auto i : order) out.push_back(xs[i]);
    return out;
}

/// Iterates the slot tuples of one word block in basis order.
class SlotCounter {
public:
    SlotCounter(const TruncatedFock& f, const NormalForm& w) : slots_(w.length(), 1) {
        for (VertexId v : w.letters) limits_.push_back(static_cast<std::uint32_t>(f.vertex_dim(v)));
    }
    const std::vector<std::uint32_t>& slots() const { return slots_; }
    void next() {
        for (std::size_t i = slots_.size(); i-- > 0;) {
            if (++slots_[i] < limits_[i]) return;
            slots_[i] = 1;
        }
    }

private:
    std::vector<std::uint32_t> slots_;
    std::vector<std::uint32_t> limits_;
};

OperatorMatrix diagonal_operator(const std::shared_ptr<const TruncatedFock>& f, auto value_of_word) {
    Triplets t;
    for (std::size_t w = 0; w < f->words().size(); ++w) {
        Complex val = value_of_word(w);
        if (val == Complex(0.0, 0.0)) continue;
        for (std::size_t p = f->word_offset(w); p < f->word_offset(w) + f->block_size(w); ++p)
            t.emplace_back(static_cast<std::int64_t>(p), static_cast<std::int64_t>(p), val);
    }
    return OperatorMatrix(f, from_triplets(f->dim(), t), static_cast<int>(f->depth()), 0);
}

OperatorMatrix leg_operator(const std::shared_ptr<const TruncatedFock>& fp, VertexId v, const CMatrix& x, bool right) {
    const TruncatedFock& f = *fp;
    check_vertex_operator(f, v, x);
    const CoxeterGroup& grp = f.group();
    const auto dv = static_cast<std::uint32_t>(f.vertex_dim(v));
    Triplets t;
    for (std::size_t wi = 0; wi < f.words().size(); ++wi) {
        const NormalForm& w = f.words()[wi];
        const std::size_t block = f.block_size(wi);
        if (block == 0) continue;
        const VertexMask ends = right ? grp.last_letters(w) : grp.first_letters(w);
        SlotCounter counter(f, w);
        if ((ends & bit(v)) == 0) {
            // x xi_v lands on the cyclic vector and on a new leg.
            Word seq = w.letters;
            if (right) seq.push_back(v);
            else seq.insert(seq.begin(), v);
            auto order = grp.canonical_order(seq);
            NormalForm u{permuted(seq, order)};
            const bool in_range = u.length() <= f.depth();
            for (std::size_t r = 0; r < block; ++r, counter.next()) {
                const auto col = static_cast<std::int64_t>(f.word_offset(wi) + r);
                if (x(0, 0) != Complex(0.0, 0.0)) t.emplace_back(col, col, x(0, 0));
                if (!in_range) continue;
                std::vector<std::uint32_t> s = counter.slots();
                if (right) s.push_back(0);
                else s.insert(s.begin(), 0);
                const std::size_t leg = right ? s.size() - 1 : 0;
                for (std::uint32_t j = 1; j < dv; ++j) {
                    Complex val = x(j, 0);
                    if (val == Complex(0.0, 0.0)) continue;
                    s[leg] = j;
                    auto row = f.position(u, permuted(s, order));
                    t.emplace_back(static_cast<std::int64_t>(*row), col, val);
                }
            }
        } else {
            // The leg of v at the word's end is acted on directly.
            std::size_t k = 0;
            if (right) {
                for (std::size_t i = w.length(); i-- > 0;)
                    if (w.letters[i] == v) {
                        k = i;
                        break;
                    }
            } else {
                while (w.letters[k] != v) ++k;
            }
            Word rest = w.letters;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
            auto order = grp.canonical_order(rest);
            NormalForm r_word{permuted(rest, order)};
            for (std::size_t r = 0; r < block; ++r, counter.next()) {
                const auto col = static_cast<std::int64_t>(f.word_offset(wi) + r);
                std::vector<std::uint32_t> s = counter.slots();
                const std::uint32_t leg = s[k];
                Complex down = x(0, leg);
                if (down != Complex(0.0, 0.0)) {
                    std::vector<std::uint32_t> rs = s;
                    rs.erase(rs.begin() + static_cast<std::ptrdiff_t>(k));
                    auto row = f.position(r_word, permuted(rs, order));
                    t.emplace_back(static_cast<std::int64_t>(*row), col, down);
                }
                for (std::uint32_t j = 1; j < dv; ++j) {
                    Complex val = x(j, leg);
                    if (val == Complex(0.0, 0.0)) continue;
                    s[k] = j;
                    auto row = f.position(w, s);
                    t.emplace_back(static_cast<std::int64_t>(*row), col, val);
                }
            }
        }
    }
    return OperatorMatrix(fp, from_triplets(f.dim(), t), static_cast<int>(f.depth()) - 1, 1);
}

struct LegSplit {
    Word lead_letters;
    std::vector<std::size_t> lead_positions;
    Word rest_letters;
    std::vector<std::size_t> rest_positions;
};

/// Splits w into its longest prefix with letters in `keep` and the rest.
LegSplit split_leading(const SimplicialGraph& g, const NormalForm& w, VertexMask keep) {
    LegSplit out;
    std::vector<bool> taken(w.length(), false);
    bool grew = true;
    while (grew) {
        grew = false;
        VertexMask before = 0;
        for (std::size_t i = 0; i < w.length(); ++i) {
            if (taken[i]) continue;
            VertexId v = w.letters[i];
            bool blocked = false;
            for (VertexId b : members(before))
                if (!g.adjacent(b, v)) blocked = true;
            if (!blocked && (keep & bit(v)) != 0) {
                taken[i] = true;
                grew = true;
                break;
            }
            before |= bit(v);
        }
    }
    for (std::size_t i = 0; i < w.length(); ++i) {
        if (taken[i]) {
            out.lead_letters.push_back(w.letters[i]);
            out.lead_positions.push_back(i);
        } else {
            out.rest_letters.push_back(w.letters[i]);
            out.rest_positions.push_back(i);
        }
    }
    return out;
}

}  // namespace

TruncatedFock::TruncatedFock(CoxeterGroup group, std::vector<std::size_t> vertex_dims, std::size_t depth,
                             FockLimits limits)
    : group_(std::move(group)), vertex_dims_(std::move(vertex_dims)), depth_(depth) {
    if (vertex_dims_.size() != group_.rank())
        throw DomainError("need one GNS dimension per vertex");
    for (auto d : vertex_dims_)
        if (d == 0) throw DomainError("GNS dimensions must be positive");
    words_ = group_.ball(depth, limits.ball);
    offsets_.push_back(0);
    for (const auto& w : words_) {
        std::size_t size = 1;
        for (VertexId v : w.letters) size *= vertex_dims_[v.index] - 1;
        offsets_.push_back(offsets_.back() + size);
        if (offsets_.back() > limits.max_dimension)
            throw ResourceError("Fock space dimension exceeds cap " + std::to_string(limits.max_dimension) +
                                " at depth " + std::to_string(depth));
    }
    word_of_.reserve(offsets_.back());
    for (std::size_t w = 0; w < words_.size(); ++w)
        for (std::size_t k = 0; k < block_size(w); ++k) word_of_.push_back(static_cast<std::uint32_t>(w));
}

std::optional<std::size_t> TruncatedFock::word_id(const NormalForm& w) const {
    if (w.length() > depth_) return std::nullopt;
    auto it = std::lower_bound(words_.begin(), words_.end(), w);
    if (it == words_.end() || *it != w) return std::nullopt;
    return static_cast<std::size_t>(it - words_.begin());
}

std::optional<std::size_t> TruncatedFock::position(const NormalForm& word, const std::vector<std::uint32_t>& slots) const {
    auto id = word_id(word);
    if (!id) return std::nullopt;
    if (slots.size() != word.length()) return std::nullopt;
    std::size_t r = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        std::size_t radix = vertex_dims_[word.letters[i].index] - 1;
        if (slots[i] < 1 || slots[i] > radix) return std::nullopt;
        r = r * radix + (slots[i] - 1);
    }
    return offsets_[*id] + r;
}

std::optional<std::size_t> TruncatedFock::index_of(const FockIndex& idx) const { return position(idx.word, idx.slots); }

std::vector<std::uint32_t> TruncatedFock::slots_at(std::size_t position) const {
    const std::size_t w = word_of_.at(position);
    const NormalForm& word = words_[w];
    std::size_t r = position - offsets_[w];
    std::vector<std::uint32_t> s(word.length());
    for (std::size_t i = word.length(); i-- > 0;) {
        std::size_t radix = vertex_dims_[word.letters[i].index] - 1;
        s[i] = static_cast<std::uint32_t>(r % radix + 1);
        r /= radix;
    }
    return s;
}

FockIndex TruncatedFock::basis(std::size_t position) const { return {words_[word_of_.at(position)], slots_at(position)}; }

std::shared_ptr<const TruncatedFock> build_fock(const SimplicialGraph& g, const std::vector<GnsRep>& reps,
                                                std::size_t depth, FockLimits limits) {
    std::vector<std::size_t> dims;
    for (const auto& r : reps) dims.push_back(r.dim());
    return build_fock(g, dims, depth, limits);
}

std::shared_ptr<const TruncatedFock> build_fock(const SimplicialGraph& g, const std::vector<std::size_t>& dims,
                                                std::size_t depth, FockLimits limits) {
    return std::make_shared<const TruncatedFock>(CoxeterGroup(g), dims, depth, limits);
}

OperatorMatrix::OperatorMatrix(std::shared_ptr<const TruncatedFock> space, SparseMatrix m, int guard, int reach)
    : space_(std::move(space)), m_(std::move(m)), guard_(std::max(guard, -1)), reach_(reach) {
    auto n = static_cast<std::int64_t>(space_->dim());
    if (m_.rows() != n || m_.cols() != n) throw DomainError("matrix size does not match the Fock space");
    m_.prune([](std::int64_t, std::int64_t, const Complex& value) { return value != Complex(0.0, 0.0); });
    guard_ = std::min(guard_, static_cast<int>(space_->depth()));
}

OperatorMatrix OperatorMatrix::identity(std::shared_ptr<const TruncatedFock> space) {
    auto n = static_cast<std::int64_t>(space->dim());
    SparseMatrix m(n, n);
    m.setIdentity();
    int depth = static_cast<int>(space->depth());
    return OperatorMatrix(std::move(space), std::move(m), depth, 0);
}

OperatorMatrix OperatorMatrix::zero(std::shared_ptr<const TruncatedFock> space) {
    auto n = static_cast<std::int64_t>(space->dim());
    int depth = static_cast<int>(space->depth());
    return OperatorMatrix(std::move(space), SparseMatrix(n, n), depth, 0);
}

OperatorMatrix OperatorMatrix::adjoint() const { return {space_, SparseMatrix(m_.adjoint()), guard_, reach_}; }

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_space(a, b);
    return {a.space_, SparseMatrix(a.m_ + b.m_), std::min(a.guard_, b.guard_), std::max(a.reach_, b.reach_)};
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_space(a, b);
    return {a.space_, SparseMatrix(a.m_ - b.m_), std::min(a.guard_, b.guard_), std::max(a.reach_, b.reach_)};
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_space(a, b);
    // A B xi is exact when B is exact at |xi| and A is exact at |xi| + reach(B);
    // the adjoint gives the symmetric condition.
    int guard = std::min(a.guard_ - b.reach_, b.guard_ - a.reach_);
    return {a.space_, SparseMatrix(a.m_ * b.m_), guard, a.reach_ + b.reach_};
}

OperatorMatrix operator*(Complex s, const OperatorMatrix& a) { return {a.space_, SparseMatrix(s * a.m_), a.guard_, a.reach_}; }

SparseMatrix restrict_columns(const TruncatedFock& f, const SparseMatrix& m, int level) {
    SparseMatrix out = m;
    out.prune([&](std::int64_t, std::int64_t col, const Complex&) {
        return static_cast<int>(f.length_at(static_cast<std::size_t>(col))) <= level;
    });
    return out;
}

double guarded_deviation(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_space(a, b);
    int level = std::min(a.guard(), b.guard());
    return frobenius_norm(restrict_columns(a.space(), SparseMatrix(a.matrix() - b.matrix()), level));
}

double guarded_norm(const OperatorMatrix& a) {
    return frobenius_norm(restrict_columns(a.space(), a.matrix(), a.guard()));
}

OperatorMatrix lambda_op(const std::shared_ptr<const TruncatedFock>& f, VertexId v, const CMatrix& x) {
    return leg_operator(f, v, x, false);
}

OperatorMatrix rho_op(const std::shared_ptr<const TruncatedFock>& f, VertexId v, const CMatrix& x) {
    return leg_operator(f, v, x, true);
}

OperatorMatrix q_projection(const std::shared_ptr<const TruncatedFock>& f, const NormalForm& w) {
    if (w.length() > f->depth())
        throw DomainError("Q_w needs |w| <= N; got |w| = " + std::to_string(w.length()));
    const CoxeterGroup& grp = f->group();
    return diagonal_operator(f, [&](std::size_t u) {
        const NormalForm& word = f->words()[u];
        return (!word.is_identity() && grp.starts_with(w, word)) ? Complex(1.0) : Complex(0.0);
    });
}

OperatorMatrix p_projection(const std::shared_ptr<const TruncatedFock>& f, const NormalForm& w) {
    auto id = f->word_id(w);
    return diagonal_operator(f, [&](std::size_t u) { return (id && u == *id) ? Complex(1.0) : Complex(0.0); });
}

OperatorMatrix length_projection(const std::shared_ptr<const TruncatedFock>& f, std::size_t level) {
    return diagonal_operator(f, [&](std::size_t u) { return f->words()[u].length() <= level ? Complex(1.0) : Complex(0.0); });
}

OperatorMatrix creation(const std::shared_ptr<const TruncatedFock>& f, VertexId v, const CMatrix& a) {
    auto q = q_projection(f, f->group().generator(v));
    auto perp = OperatorMatrix::identity(f) - q;
    // The product equals the compression of Q_v a Q_v^perp exactly.
    return (q * lambda_op(f, v, a) * perp).with_bounds(static_cast<int>(f->depth()) - 1, 1);
}

OperatorMatrix diagonal(const std::shared_ptr<const TruncatedFock>& f, VertexId v, const CMatrix& a) {
    auto q = q_projection(f, f->group().generator(v));
    // Q_v a Q_v preserves every H_w, so its compression is exact everywhere.
    return (q * lambda_op(f, v, a) * q).with_bounds(static_cast<int>(f->depth()), 0);
}

OperatorMatrix annihilation(const std::shared_ptr<const TruncatedFock>& f, VertexId v, const CMatrix& a) {
    auto q = q_projection(f, f->group().generator(v));
    auto perp = OperatorMatrix::identity(f) - q;
    return (perp * lambda_op(f, v, a) * q).with_bounds(static_cast<int>(f->depth()) - 1, 1);
}

OperatorMatrix gauge_unitary(const std::shared_ptr<const TruncatedFock>& f, const std::vector<Complex>& z) {
    if (z.size() != f->graph().size()) throw DomainError("gauge parameter needs one entry per vertex");
    for (Complex c : z)
        if (std::abs(std::abs(c) - 1.0) > 1e-12) throw DomainError("gauge parameters must be unimodular");
    return diagonal_operator(f, [&](std::size_t u) {
        Complex val = 1.0;
        for (VertexId v : f->words()[u].letters) val *= z[v.index];
        return val;
    });
}

OperatorMatrix expectation_diag(const OperatorMatrix& x) {
    const TruncatedFock& f = x.space();
    SparseMatrix m = x.matrix();
    m.prune([&](std::int64_t r, std::int64_t c, const Complex&) {
        return f.word_at(static_cast<std::size_t>(r)) == f.word_at(static_cast<std::size_t>(c));
    });
    return OperatorMatrix(x.space_ptr(), std::move(m), x.guard(), 0);
}

OperatorMatrix gauge_average(const OperatorMatrix& x, std::size_t grid_order) {
    if (grid_order == 0) throw DomainError("grid order must be positive");
    const TruncatedFock& f = x.space();
    const std::size_t n = f.graph().size();
    const int depth = static_cast<int>(f.depth());
    // The grid average factorizes over vertices into (1/M) sum_k zeta^(k d)
    // for the difference d of letter counts between row and column words.
    std::vector<Complex> avg(static_cast<std::size_t>(4 * depth + 1));
    for (int d = -2 * depth; d <= 2 * depth; ++d) {
        Complex s = 0.0;
        for (std::size_t k = 0; k < grid_order; ++k)
            s += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) * d / static_cast<double>(grid_order));
        avg[static_cast<std::size_t>(d + 2 * depth)] = s / static_cast<double>(grid_order);
    }
    std::vector<std::vector<int>> counts(f.words().size(), std::vector<int>(n, 0));
    for (std::size_t w = 0; w < f.words().size(); ++w)
        for (VertexId v : f.words()[w].letters) ++counts[w][v.index];
    SparseMatrix m = x.matrix();
    for (Eigen::Index k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            const auto& rc = counts[f.word_at(static_cast<std::size_t>(it.row()))];
            const auto& cc = counts[f.word_at(static_cast<std::size_t>(it.col()))];
            Complex factor = 1.0;
            for (std::size_t v = 0; v < n; ++v) factor *= avg[static_cast<std::size_t>(rc[v] - cc[v] + 2 * depth)];
            it.valueRef() *= factor;
        }
    return OperatorMatrix(x.space_ptr(), std::move(m), x.guard(), x.reach());
}

OperatorMatrix expectation_subgraph(const OperatorMatrix& x, const SimplicialGraph& sub) {
    const SimplicialGraph& g = x.space().graph();
    VertexMask keep = 0;
    for (const auto& name : sub.names()) {
        auto v = g.find(name);
        if (!v) throw DomainError("subgraph vertex '" + name + "' is not in the graph");
        keep |= bit(*v);
    }
    if (!(g.induced(keep) == sub)) throw DomainError("subgraph is not induced");
    return expectation_subgraph(x, keep);
}

OperatorMatrix expectation_subgraph(const OperatorMatrix& x, VertexMask keep) {
    const TruncatedFock& f = x.space();
    const SimplicialGraph& g = f.graph();
    const CoxeterGroup& grp = f.group();
    keep &= g.all();

    // Split every word into its leading Gamma_0 legs and the remaining legs.
    std::vector<LegSplit> splits;
    splits.reserve(f.words().size());
    for (const auto& w : f.words()) splits.push_back(split_leading(g, w, keep));

    // Rows and columns of S* x S: positions whose word lies in W_{Gamma_0}.
    std::vector<std::vector<std::pair<std::size_t, Complex>>> columns(f.dim());
    for (Eigen::Index k = 0; k < x.matrix().outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(x.matrix(), k); it; ++it) {
            auto r = static_cast<std::size_t>(it.row());
            auto c = static_cast<std::size_t>(it.col());
            if (!splits[f.word_at(r)].rest_letters.empty() || !splits[f.word_at(c)].rest_letters.empty()) continue;
            columns[c].emplace_back(r, it.value());
        }

    Triplets t;
    for (std::size_t p = 0; p < f.dim(); ++p) {
        const std::size_t wi = f.word_at(p);
        const LegSplit& sp = splits[wi];
        const auto slots = f.slots_at(p);
        std::vector<std::uint32_t> lead_slots;
        std::vector<std::uint32_t> rest_slots;
        for (auto i : sp.lead_positions) lead_slots.push_back(slots[i]);
        for (auto i : sp.rest_positions) rest_slots.push_back(slots[i]);
        auto lead_order = grp.canonical_order(sp.lead_letters);
        NormalForm lead{permuted(sp.lead_letters, lead_order)};
        auto src = f.position(lead, permuted(lead_slots, lead_order));
        for (const auto& [row, val] : columns[*src]) {
            FockIndex target = f.basis(row);
            Word seq = target.word.letters;
            std::vector<std::uint32_t> s = target.slots;
            seq.insert(seq.end(), sp.rest_letters.begin(), sp.rest_letters.end());
            s.insert(s.end(), rest_slots.begin(), rest_slots.end());
            auto order = grp.canonical_order(seq);
            NormalForm u{permuted(seq, order)};
            if (u.length() > f.depth()) continue;
            auto dst = f.position(u, permuted(s, order));
            t.emplace_back(static_cast<std::int64_t>(*dst), static_cast<std::int64_t>(p), val);
        }
    }
    int guard = std::min(x.guard(), static_cast<int>(f.depth()) - x.reach());
    return OperatorMatrix(x.space_ptr(), from_triplets(f.dim(), t), guard, x.reach());
}

Complex vacuum_eval(const OperatorMatrix& x) { return x.matrix().coeff(0, 0); }

std::vector<double> tail_profile(const OperatorMatrix& x) {
    const TruncatedFock& f = x.space();
    OperatorMatrix e = expectation_diag(x.adjoint() * x);
    CMatrix dense = e.dense();
    std::vector<double> block_norm(f.words().size(), 0.0);
    for (std::size_t w = 0; w < f.words().size(); ++w) {
        auto off = static_cast<Eigen::Index>(f.word_offset(w));
        auto size = static_cast<Eigen::Index>(f.block_size(w));
        if (size == 0) continue;
        CMatrix b = dense.block(off, off, size, size);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (b + b.adjoint()), Eigen::EigenvaluesOnly);
        block_norm[w] = std::max(0.0, es.eigenvalues().maxCoeff());
    }
    std::vector<double> out;
    for (std::size_t k = 0; k < f.depth(); ++k) {
        double m = 0.0;
        for (std::size_t w = 0; w < f.words().size(); ++w)
            if (f.words()[w].length() > k) m = std::max(m, block_norm[w]);
        out.push_back(m);
    }
    return out;
}

CMatrix centered_matrix(const CMatrix& x) {
    return x - x(0, 0) * CMatrix::Identity(x.rows(), x.cols());
}

TensorSplitReport tensor_split_check(const SimplicialGraph& g, VertexMask first, const std::vector<GnsRep>& reps,
                                     std::size_t depth) {
    first &= g.all();
    const VertexMask second = g.all() & ~first;
    for (VertexId u : members(first))
        for (VertexId v : members(second))
            if (!g.adjacent(u, v)) throw DomainError("not a join decomposition: " + g.name(u) + " and " + g.name(v) + " are not adjacent");
    if (reps.size() != g.size()) throw DomainError("need one GNS representation per vertex");

    std::vector<std::size_t> dims;
    for (const auto& r : reps) dims.push_back(r.dim());
    auto full = build_fock(g, dims, depth);
    auto make_factor = [&](VertexMask m) {
        std::vector<std::size_t> d;
        for (VertexId v : members(m)) d.push_back(dims[v.index]);
        return build_fock(g.induced(m), d, depth);
    };
    auto f1 = make_factor(first);
    auto f2 = make_factor(second);
    auto local = [](VertexMask m) {
        std::vector<std::uint32_t> idx(max_vertices, 0);
        std::uint32_t k = 0;
        for (VertexId v : members(m)) idx[v.index] = k++;
        return idx;
    };
    const auto local1 = local(first);
    const auto local2 = local(second);

    // U: full basis position -> (factor-1 position, factor-2 position).
    std::vector<std::pair<std::size_t, std::size_t>> split(full->dim());
    std::unordered_map<std::size_t, std::size_t> back;
    for (std::size_t p = 0; p < full->dim(); ++p) {
        FockIndex idx = full->basis(p);
        FockIndex a, b;
        for (std::size_t i = 0; i < idx.word.length(); ++i) {
            VertexId v = idx.word.letters[i];
            if ((first & bit(v)) != 0) {
                a.word.letters.push_back(VertexId{local1[v.index]});
                a.slots.push_back(idx.slots[i]);
            } else {
                b.word.letters.push_back(VertexId{local2[v.index]});
                b.slots.push_back(idx.slots[i]);
            }
        }
        auto o1 = f1->group().canonical_order(a.word.letters);
        auto o2 = f2->group().canonical_order(b.word.letters);
        auto p1 = f1->position(NormalForm{permuted(a.word.letters, o1)}, permuted(a.slots, o1));
        auto p2 = f2->position(NormalForm{permuted(b.word.letters, o2)}, permuted(b.slots, o2));
        split[p] = {*p1, *p2};
        back[*p1 * f2->dim() + *p2] = p;
    }

    TensorSplitReport report;
    report.dimension = full->dim();
    auto check = [&](VertexId v, const CMatrix& x) {
        const bool in_first = (first & bit(v)) != 0;
        OperatorMatrix whole = lambda_op(full, v, x);
        OperatorMatrix part = in_first ? lambda_op(f1, VertexId{local1[v.index]}, x)
                                       : lambda_op(f2, VertexId{local2[v.index]}, x);
        Triplets t;
        for (std::size_t p = 0; p < full->dim(); ++p) {
            auto [i1, i2] = split[p];
            const std::size_t col = in_first ? i1 : i2;
            for (SparseMatrix::InnerIterator it(part.matrix(), static_cast<std::int64_t>(col)); it; ++it) {
                auto r = static_cast<std::size_t>(it.row());
                auto key = in_first ? r * f2->dim() + i2 : i1 * f2->dim() + r;
                auto dst = back.find(key);
                if (dst == back.end()) continue;
                t.emplace_back(static_cast<std::int64_t>(dst->second), static_cast<std::int64_t>(p), it.value());
            }
        }
        OperatorMatrix kron(full, from_triplets(full->dim(), t), whole.guard(), 1);
        report.max_deviation = std::max(report.max_deviation, guarded_deviation(whole, kron));
        ++report.generators_checked;
    };
    for (VertexId v : g.vertices())
        for (const auto& unit : matrix_units(reps[v.index].algebra())) check(v, reps[v.index].left_mult(unit));
    return report;
}

}  // namespace gplab
