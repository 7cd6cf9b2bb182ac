#include "gplab/boundary.hpp"

#include <algorithm>

namespace gplab {

LatticeProjection::LatticeProjection(const CoxeterGroup& grp, const std::vector<NormalForm>& ball, const NormalForm& word)
    : word_(word) {
    diag_.reserve(ball.size());
    for (const auto& v : ball) diag_.push_back(grp.starts_with(word, v) ? 1 : 0);
}

std::size_t LatticeProjection::rank() const {
    return static_cast<std::size_t>(std::count(diag_.begin(), diag_.end(), std::uint8_t{1}));
}

LatticeCheck lattice_product(const CoxeterGroup& grp, const NormalForm& u, const NormalForm& w, std::size_t depth) {
    return lattice_product(grp, grp.ball(depth), depth, u, w);
}

LatticeCheck lattice_product(const CoxeterGroup& grp, const std::vector<NormalForm>& ball, std::size_t depth,
                             const NormalForm& u, const NormalForm& w) {
    LatticeCheck out;
    out.join = grp.join(u, w);
    out.inconclusive = u.length() + w.length() > depth;
    LatticeProjection pu(grp, ball, u);
    LatticeProjection pw(grp, ball, w);
    std::vector<std::uint8_t> target(ball.size(), 0);
    if (out.join) target = LatticeProjection(grp, ball, *out.join).diagonal();
    for (std::size_t i = 0; i < ball.size(); ++i)
        if ((pu.diagonal()[i] & pw.diagonal()[i]) != target[i]) ++out.mismatches;
    return out;
}

QSymbolic QSymbolic::single(const NormalForm& w, int coefficient) {
    QSymbolic q;
    if (coefficient != 0) q.terms[w] = coefficient;
    return q;
}

QSymbolic operator+(const QSymbolic& a, const QSymbolic& b) {
    QSymbolic out = a;
    for (const auto& [w, c] : b.terms) {
        int& slot = out.terms[w];
        slot += c;
        if (slot == 0) out.terms.erase(w);
    }
    return out;
}

QSymbolic operator-(const QSymbolic& a, const QSymbolic& b) {
    QSymbolic neg;
    for (const auto& [w, c] : b.terms) neg.terms[w] = -c;
    return a + neg;
}

bool operator==(const QSymbolic& a, const QSymbolic& b) { return a.terms == b.terms; }

ActionCase action_case(const CoxeterGroup& grp, VertexId v, const NormalForm& w) {
    if (!grp.commutes_with(w, v)) return ActionCase::NotCentralizing;
    return grp.starts_with(v, w) ? ActionCase::CentralizingBelow : ActionCase::CentralizingNotBelow;
}

QSymbolic act_on_Q(const CoxeterGroup& grp, VertexId v, const NormalForm& w) {
    const NormalForm vw = grp.multiply(grp.generator(v), w);
    switch (action_case(grp, v, w)) {
    case ActionCase::NotCentralizing: return QSymbolic::single(vw);
    case ActionCase::CentralizingBelow: return QSymbolic::single(vw) - QSymbolic::single(w);
    case ActionCase::CentralizingNotBelow: break;
    }
    return QSymbolic::single(w);
}

QSymbolic act_on_Q(const CoxeterGroup& grp, VertexId v, const QSymbolic& q) {
    QSymbolic out;
    for (const auto& [w, c] : q.terms) {
        QSymbolic part = act_on_Q(grp, v, w);
        for (auto& [_, k] : part.terms) k *= c;
        out = out + part;
    }
    return out;
}

std::string format_q(const CoxeterGroup& grp, const QSymbolic& q) {
    if (q.terms.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : q.terms) {
        if (!out.empty()) out += c < 0 ? " - " : " + ";
        else if (c < 0) out += "-";
        int m = std::abs(c);
        if (m != 1) out += std::to_string(m) + " ";
        out += "Q_" + grp.format(w);
    }
    return out;
}

OperatorMatrix materialize(const std::shared_ptr<const TruncatedFock>& f, const QSymbolic& q) {
    OperatorMatrix out = OperatorMatrix::zero(f);
    for (const auto& [w, c] : q.terms) {
        OperatorMatrix term = w.is_identity() ? OperatorMatrix::identity(f) : q_projection(f, w);
        out = out + Complex(static_cast<double>(c), 0.0) * term;
    }
    return out;
}

IdentificationCheck identification_check(const std::shared_ptr<const TruncatedFock>& f) {
    IdentificationCheck out;
    const CoxeterGroup& grp = f->group();
    std::vector<std::pair<NormalForm, std::size_t>> etas;
    for (const auto& v : f->words())
        // Words through a leg with one-dimensional GNS space carry no eta.
        if (auto eta = f->position(v, std::vector<std::uint32_t>(v.length(), 1))) etas.emplace_back(v, *eta);
    for (const auto& w : f->words()) {
        const OperatorMatrix q = w.is_identity() ? OperatorMatrix::identity(f) : q_projection(f, w);
        for (const auto& [v, eta] : etas) {
            const auto at = static_cast<Eigen::Index>(eta);
            const bool fock = q.matrix().coeff(at, at) == Complex(1.0);
            ++out.pairs_checked;
            if (grp.starts_with(w, v) != fock) ++out.mismatches;
        }
    }
    return out;
}

TopofreeWitness topofree_witness(const CoxeterGroup& grp, const NormalForm& w, const std::vector<NormalForm>& s,
                                 WitnessLimits limits) {
    const SimplicialGraph& g = grp.graph();
    if (g.size() < 3) throw DomainError("topological freeness witness needs at least three vertices");
    const SimplicialGraph comp = complement(g);
    auto walk = closed_covering_walk(comp);
    if (!walk) throw DomainError("the complement graph is disconnected");

    TopofreeWitness out;
    out.walk = *walk;
    NormalForm cycle = grp.reduce(walk->steps);
    std::vector<NormalForm> powers{grp.identity()};
    for (std::size_t l = 1; l <= limits.max_power; ++l) powers.push_back(grp.multiply(powers.back(), cycle));
    std::vector<NormalForm> others;
    for (const auto& x : s)
        if (!x.is_identity()) others.push_back(x);

    for (const auto& v : grp.ball(limits.search_radius)) {
        if (v.is_identity()) continue;
        ++out.candidates_tried;
        const NormalForm wv = grp.multiply(w, v);
        if (wv.length() != w.length() + v.length()) continue;
        std::vector<WitnessStep> steps;
        bool ok = true;
        for (std::size_t l = 1; l <= limits.max_power && ok; ++l) {
            WitnessStep step;
            step.power = l;
            const NormalForm target = grp.multiply(wv, powers[l]);
            step.length_additive = target.length() == wv.length() + powers[l].length() &&
                                   powers[l].length() == l * walk->steps.size();
            step.not_prefix = std::all_of(others.begin(), others.end(), [&](const NormalForm& x) {
                return !grp.starts_with(target, grp.multiply(x, target));
            });
            ok = step.length_additive && step.not_prefix;
            steps.push_back(step);
        }
        if (!ok) continue;
        out.found = true;
        out.v = v;
        out.checks = std::move(steps);
        return out;
    }
    return out;
}

}  // namespace gplab
