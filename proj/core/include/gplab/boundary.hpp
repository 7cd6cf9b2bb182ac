#pragma once

#include <map>
#include <optional>
#include <vector>

#include "gplab/fock.hpp"

namespace gplab {

/// Diagonal 0/1 projection onto span{delta_v : word <= v} on a ball of l^2(W).
/// P_e is the identity.
class LatticeProjection {
public:
    LatticeProjection(const CoxeterGroup& grp, const std::vector<NormalForm>& ball, const NormalForm& word);

    const NormalForm& word() const { return word_; }
    const std::vector<std::uint8_t>& diagonal() const { return diag_; }
    std::size_t rank() const;

private:
    NormalForm word_;
    std::vector<std::uint8_t> diag_;
};

struct LatticeCheck {
    std::optional<NormalForm> join;
    /// Number of basis vectors where P_u P_w and P_{u v w} disagree.
    std::size_t mismatches = 0;
    /// The ball is too shallow for |u| + |w|; the comparison proves nothing.
    bool inconclusive = false;
};

LatticeCheck lattice_product(const CoxeterGroup& grp, const NormalForm& u, const NormalForm& w, std::size_t depth);
/// Same check against a precomputed ball of the given depth.
LatticeCheck lattice_product(const CoxeterGroup& grp, const std::vector<NormalForm>& ball, std::size_t depth,
                             const NormalForm& u, const NormalForm& w);

/// Integer combination of symbols Q_w.
struct QSymbolic {
    std::map<NormalForm, int> terms;

    static QSymbolic single(const NormalForm& w, int coefficient = 1);
    friend QSymbolic operator+(const QSymbolic& a, const QSymbolic& b);
    friend QSymbolic operator-(const QSymbolic& a, const QSymbolic& b);
    friend bool operator==(const QSymbolic& a, const QSymbolic& b);
};

enum class ActionCase { NotCentralizing = 1, CentralizingBelow = 2, CentralizingNotBelow = 3 };

ActionCase action_case(const CoxeterGroup& grp, VertexId v, const NormalForm& w);
/// v.Q_w by the three cases of the action of a generator.
QSymbolic act_on_Q(const CoxeterGroup& grp, VertexId v, const NormalForm& w);
QSymbolic act_on_Q(const CoxeterGroup& grp, VertexId v, const QSymbolic& q);
std::string format_q(const CoxeterGroup& grp, const QSymbolic& q);

/// Operator on the Fock space with the symbol Q_e read as the identity.
OperatorMatrix materialize(const std::shared_ptr<const TruncatedFock>& f, const QSymbolic& q);

struct IdentificationCheck {
    std::size_t pairs_checked = 0;
    std::size_t mismatches = 0;
};

/// <P_w delta_v, delta_v> against <Q_w eta_v, eta_v> for all v, w in the
/// Fock ball, eta_v the product of the first basis vectors of each leg.
IdentificationCheck identification_check(const std::shared_ptr<const TruncatedFock>& f);

struct WitnessStep {
    std::size_t power = 0;
    bool length_additive = false;
    bool not_prefix = false;
};

struct TopofreeWitness {
    bool found = false;
    NormalForm v;
    Walk walk;
    std::vector<WitnessStep> checks;
    std::size_t candidates_tried = 0;
};

struct WitnessLimits {
    std::size_t search_radius = 4;
    std::size_t max_power = 4;
};

/// Searches v != e by length, then lexicographically, such that with the
/// canonical closed covering walk t of the complement, |w v t^L| is additive
/// and w v t^L is not a prefix of x w v t^L for x in S minus e and
/// 1 <= L <= max_power. Throws DomainError when the graph has fewer than three
/// vertices or a disconnected complement.
TopofreeWitness topofree_witness(const CoxeterGroup& grp, const NormalForm& w, const std::vector<NormalForm>& s,
                                 WitnessLimits limits = {});

}  // namespace gplab
