#include "gplab/vertex_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace gplab {

namespace {

void require_conformant(const FiniteDimAlgebra& alg, const AlgebraElement& x) {
    if (!x.conforms_to(alg)) throw DomainError("element does not conform to the algebra's block sizes");
}

AlgebraElement zip(const AlgebraElement& a, const AlgebraElement& b, auto op) {
    if (a.blocks.size() != b.blocks.size()) throw DomainError("elements have different block counts");
    AlgebraElement out;
    for (std::size_t k = 0; k < a.blocks.size(); ++k) {
        if (a.blocks[k].rows() != b.blocks[k].rows()) throw DomainError("elements have different block sizes");
        out.blocks.push_back(op(a.blocks[k], b.blocks[k]));
    }
    return out;
}

std::size_t total_slots(const FiniteDimAlgebra& alg) {
    return std::accumulate(alg.blocks.begin(), alg.blocks.end(), std::size_t{0});
}

}  // namespace

std::size_t FiniteDimAlgebra::dimension() const {
    std::size_t d = 0;
    for (auto b : blocks) d += b * b;
    return d;
}

AlgebraElement AlgebraElement::identity(const FiniteDimAlgebra& alg) {
    AlgebraElement x;
    for (auto d : alg.blocks) x.blocks.push_back(CMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
    return x;
}

AlgebraElement AlgebraElement::zero(const FiniteDimAlgebra& alg) {
    AlgebraElement x;
    for (auto d : alg.blocks) x.blocks.push_back(CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
    return x;
}

AlgebraElement AlgebraElement::unit(const FiniteDimAlgebra& alg, std::size_t block, std::size_t i, std::size_t j) {
    AlgebraElement x = zero(alg);
    x.blocks.at(block)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
    return x;
}

AlgebraElement AlgebraElement::diagonal(const FiniteDimAlgebra& alg, const std::vector<Complex>& entries) {
    if (entries.size() != total_slots(alg)) throw DomainError("diagonal needs one entry per slot");
    AlgebraElement x = zero(alg);
    std::size_t s = 0;
    for (auto& b : x.blocks)
        for (Eigen::Index i = 0; i < b.rows(); ++i) b(i, i) = entries[s++];
    return x;
}

AlgebraElement AlgebraElement::random(const FiniteDimAlgebra& alg, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    AlgebraElement x = zero(alg);
    for (auto& b : x.blocks)
        for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = Complex(n(rng), n(rng));
    return x;
}

AlgebraElement AlgebraElement::adjoint() const {
    AlgebraElement x;
    for (const auto& b : blocks) x.blocks.push_back(b.adjoint());
    return x;
}

bool AlgebraElement::conforms_to(const FiniteDimAlgebra& alg) const {
    if (blocks.size() != alg.blocks.size()) return false;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        auto d = static_cast<Eigen::Index>(alg.blocks[k]);
        if (blocks[k].rows() != d || blocks[k].cols() != d) return false;
    }
    return true;
}

double AlgebraElement::norm() const {
    double m = 0.0;
    for (const auto& b : blocks) m = std::max(m, operator_norm_dense(b));
    return m;
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    return zip(a, b, [](const CMatrix& x, const CMatrix& y) -> CMatrix { return x + y; });
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    return zip(a, b, [](const CMatrix& x, const CMatrix& y) -> CMatrix { return x - y; });
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    return zip(a, b, [](const CMatrix& x, const CMatrix& y) -> CMatrix { return x * y; });
}

AlgebraElement operator*(Complex s, const AlgebraElement& a) {
    AlgebraElement x = a;
    for (auto& b : x.blocks) b *= s;
    return x;
}

StateSpec StateSpec::normalized_trace(const FiniteDimAlgebra& alg) {
    const auto n = static_cast<double>(total_slots(alg));
    StateSpec st;
    for (auto d : alg.blocks)
        st.densities.push_back(CMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) / n);
    return st;
}

StateSpec StateSpec::weights(const std::vector<double>& w) {
    StateSpec st;
    for (double x : w) st.densities.push_back(CMatrix::Constant(1, 1, Complex(x, 0.0)));
    return st;
}

Complex StateSpec::evaluate(const AlgebraElement& x) const {
    if (x.blocks.size() != densities.size()) throw DomainError("element does not conform to the state");
    Complex s = 0.0;
    for (std::size_t k = 0; k < densities.size(); ++k) s += (densities[k] * x.blocks[k]).trace();
    return s;
}

void StateSpec::validate(const FiniteDimAlgebra& alg, double tol) const {
    if (densities.size() != alg.blocks.size())
        throw DomainError("state has " + std::to_string(densities.size()) + " densities for " +
                          std::to_string(alg.blocks.size()) + " blocks");
    Complex total = 0.0;
    for (std::size_t k = 0; k < densities.size(); ++k) {
        const CMatrix& r = densities[k];
        auto d = static_cast<Eigen::Index>(alg.blocks[k]);
        if (alg.blocks[k] == 0) throw DomainError("block sizes must be positive");
        if (r.rows() != d || r.cols() != d)
            throw DomainError("density of block " + std::to_string(k) + " has the wrong size");
        if ((r - r.adjoint()).norm() > tol) throw DomainError("density of block " + std::to_string(k) + " is not Hermitian");
        if (min_eigenvalue(r) < -tol) throw DomainError("density of block " + std::to_string(k) + " is not positive semidefinite");
        total += r.trace();
    }
    if (std::abs(total - Complex(1.0, 0.0)) > tol) throw DomainError("densities do not have total trace 1");
}

bool StateSpec::is_faithful(double tol) const {
    return std::all_of(densities.begin(), densities.end(), [tol](const CMatrix& r) { return min_eigenvalue(r) > tol; });
}

bool StateSpec::is_tracial(const FiniteDimAlgebra& alg, double tol) const {
    auto units = matrix_units(alg);
    for (const auto& x : units)
        for (const auto& y : units)
            if (std::abs(evaluate(x * y) - evaluate(y * x)) > tol) return false;
    return true;
}

std::vector<AlgebraElement> matrix_units(const FiniteDimAlgebra& alg) {
    std::vector<AlgebraElement> out;
    for (std::size_t k = 0; k < alg.blocks.size(); ++k)
        for (std::size_t j = 0; j < alg.blocks[k]; ++j)
            for (std::size_t i = 0; i < alg.blocks[k]; ++i) out.push_back(AlgebraElement::unit(alg, k, i, j));
    return out;
}

GnsRep::GnsRep(FiniteDimAlgebra alg, StateSpec state, const std::vector<AlgebraElement>& seeds)
    : alg_(std::move(alg)), state_(std::move(state)) {
    state_.validate(alg_);
    for (std::size_t k = 0; k < state_.densities.size(); ++k) {
        if (min_eigenvalue(state_.densities[k]) <= 1e-12)
            throw DomainError("non-faithful state: density of block " + std::to_string(k) + " is singular");
        Eigen::LLT<CMatrix> llt(state_.densities[k]);
        factors_.push_back(llt.matrixL());
    }
    // With rho = L L*, x -> x L is an isometry of L^2(A, omega) onto the
    // Hilbert-Schmidt space. Complete xi = L (and the seed vectors) to an
    // orthonormal basis there.
    const auto n = static_cast<Eigen::Index>(alg_.dimension());
    const auto lead = static_cast<Eigen::Index>(seeds.size() + 1);
    CMatrix cols(n, lead + n);
    cols.col(0) = hilbert_schmidt_vector(AlgebraElement::identity(alg_));
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        require_conformant(alg_, seeds[s]);
        cols.col(static_cast<Eigen::Index>(s) + 1) = hilbert_schmidt_vector(seeds[s]);
    }
    cols.rightCols(n) = CMatrix::Identity(n, n);
    Eigen::HouseholderQR<CMatrix> qr(cols);
    basis_ = qr.householderQ() * CMatrix::Identity(n, n);
    for (Eigen::Index j = 0; j < std::min(lead, n); ++j) {
        Complex c = basis_.col(j).dot(cols.col(j));
        if (std::abs(c) > 0.0) basis_.col(j) *= c / std::abs(c);
    }
}

CVector GnsRep::hilbert_schmidt_vector(const AlgebraElement& x) const {
    CVector v(static_cast<Eigen::Index>(alg_.dimension()));
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < alg_.blocks.size(); ++k) {
        CMatrix y = x.blocks[k] * factors_[k];
        v.segment(off, y.size()) = Eigen::Map<const CVector>(y.data(), y.size());
        off += y.size();
    }
    return v;
}

CMatrix GnsRep::hilbert_schmidt_left(const AlgebraElement& x) const {
    const auto n = static_cast<Eigen::Index>(alg_.dimension());
    CMatrix m = CMatrix::Zero(n, n);
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < alg_.blocks.size(); ++k) {
        auto d = static_cast<Eigen::Index>(alg_.blocks[k]);
        // Column-major vec(x X) = (I (x) x) vec(X).
        for (Eigen::Index c = 0; c < d; ++c) m.block(off + c * d, off + c * d, d, d) = x.blocks[k];
        off += d * d;
    }
    return m;
}

CMatrix GnsRep::left_mult(const AlgebraElement& x) const {
    require_conformant(alg_, x);
    return basis_.adjoint() * hilbert_schmidt_left(x) * basis_;
}

CVector GnsRep::vector_of(const AlgebraElement& x) const {
    require_conformant(alg_, x);
    return basis_.adjoint() * hilbert_schmidt_vector(x);
}

CVector GnsRep::cyclic_vector() const {
    CVector e = CVector::Zero(static_cast<Eigen::Index>(dim()));
    e[0] = 1.0;
    return e;
}

GnsRep gns(const FiniteDimAlgebra& alg, const StateSpec& st) { return GnsRep(alg, st); }

AlgebraElement centered(const AlgebraElement& x, const StateSpec& st) {
    Complex w = st.evaluate(x);
    AlgebraElement out = x;
    for (auto& b : out.blocks) b -= w * CMatrix::Identity(b.rows(), b.cols());
    return out;
}

double optimal_q(const AlgebraElement& a, const StateSpec& st, double tol) {
    if (a.norm() <= tol) throw DomainError("witness element is zero");
    if (std::abs(st.evaluate(a)) > tol * std::max(1.0, a.norm()))
        throw DomainError("witness element is not centered: omega(a) != 0");
    double lo = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (const auto& b : a.blocks) {
        CMatrix aa = b * b.adjoint();
        lo = std::min(lo, min_eigenvalue(aa));
        scale = std::max(scale, aa.norm());
    }
    double denom = st.evaluate(a.adjoint() * a).real();
    if (lo <= 1e-12 * scale) return 0.0;
    return lo / denom;
}

bool is_unitary(const AlgebraElement& u, double tol) {
    for (const auto& b : u.blocks)
        if ((b * b.adjoint() - CMatrix::Identity(b.rows(), b.cols())).norm() > tol) return false;
    return true;
}

bool is_state_central(const FiniteDimAlgebra& alg, const StateSpec& st, const AlgebraElement& u, double tol) {
    for (const auto& x : matrix_units(alg))
        if (std::abs(st.evaluate(u * x) - st.evaluate(x * u)) > tol) return false;
    return true;
}

std::optional<UnitarySearchResult> centered_unitary_search(const FiniteDimAlgebra& alg, const StateSpec& st,
                                                           UnitarySearchLimits limits) {
    const std::size_t slots = total_slots(alg);
    std::size_t tried = 0;
    std::optional<UnitarySearchResult> first;

    // Returns true when the search can stop (a central witness was found).
    auto consider = [&](const AlgebraElement& u) {
        ++tried;
        if (std::abs(st.evaluate(u)) > limits.tolerance) return false;
        bool central = is_state_central(alg, st, u);
        if (central || !first) first = UnitarySearchResult{u, central, tried};
        return central;
    };
    auto exhausted = [&] { return tried >= limits.max_candidates; };

    // Diagonal sign patterns; the first slot is fixed since -u works iff u does.
    if (slots >= 1) {
        const std::size_t free_bits = std::min<std::size_t>(slots - 1, 20);
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << free_bits) && !exhausted(); ++m) {
            std::vector<Complex> d(slots, 1.0);
            for (std::size_t s = 0; s < free_bits; ++s)
                if ((m >> s) & 1U) d[s + 1] = -1.0;
            if (consider(AlgebraElement::diagonal(alg, d))) return first;
        }
    }

    // Blockwise signed permutations, skipping the all-identity arrangement.
    {
        std::vector<std::vector<std::size_t>> perms;
        for (auto d : alg.blocks) {
            perms.emplace_back(d);
            std::iota(perms.back().begin(), perms.back().end(), std::size_t{0});
        }
        auto advance = [&] {
            for (auto& p : perms)
                if (std::next_permutation(p.begin(), p.end())) return true;
            return false;
        };
        while (advance() && !exhausted()) {
            const std::size_t free_bits = std::min<std::size_t>(slots - 1, 12);
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << free_bits) && !exhausted(); ++m) {
                AlgebraElement u = AlgebraElement::zero(alg);
                std::size_t s = 0;
                for (std::size_t k = 0; k < alg.blocks.size(); ++k)
                    for (std::size_t i = 0; i < alg.blocks[k]; ++i, ++s) {
                        double sign = (s > 0 && s - 1 < free_bits && ((m >> (s - 1)) & 1U)) ? -1.0 : 1.0;
                        u.blocks[k](static_cast<Eigen::Index>(perms[k][i]), static_cast<Eigen::Index>(i)) = sign;
                    }
                if (consider(u)) return first;
            }
        }
    }

    // Diagonal phase grid with the first phase fixed to 1.
    if (slots >= 2) {
        const std::size_t p = limits.phases_per_slot;
        std::vector<std::size_t> digits(slots - 1, 0);
        for (;;) {
            if (exhausted()) break;
            std::vector<Complex> d(slots, 1.0);
            for (std::size_t s = 0; s + 1 < slots; ++s)
                d[s + 1] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(digits[s]) / static_cast<double>(p));
            if (consider(AlgebraElement::diagonal(alg, d))) return first;
            std::size_t s = 0;
            while (s < digits.size() && ++digits[s] == p) digits[s++] = 0;
            if (s == digits.size()) break;
        }
    }
    if (first) first->candidates_tried = tried;
    return first;
}

std::size_t commutant_dimension(const GnsRep& rep, double tol) {
    const auto d = static_cast<Eigen::Index>(rep.dim());
    auto units = matrix_units(rep.algebra());
    CMatrix stacked(static_cast<Eigen::Index>(units.size()) * d * d, d * d);
    const CMatrix id = CMatrix::Identity(d, d);
    Eigen::Index row = 0;
    for (const auto& x : units) {
        CMatrix a = rep.left_mult(x);
        // vec(X A - A X) = (A^T (x) I - I (x) A) vec(X).
        CMatrix k = CMatrix::Zero(d * d, d * d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) {
                k.block(i * d, j * d, d, d) += a(j, i) * id;
                if (i == j) k.block(i * d, j * d, d, d) -= a;
            }
        stacked.middleRows(row, d * d) = k;
        row += d * d;
    }
    Eigen::JacobiSVD<CMatrix> svd(stacked);
    const auto& s = svd.singularValues();
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > tol * std::max(1.0, s[0])) ++rank;
    return static_cast<std::size_t>(d * d) - rank;
}

bool commutant_is_trivial(const GnsRep& rep, double tol) { return commutant_dimension(rep, tol) == 1; }

double hecke_parameter(double q) {
    if (!(q > 0.0)) throw DomainError("Hecke parameter q must be positive");
    return (q - 1.0) / std::sqrt(q);
}

HeckeVertex hecke_vertex(double q) {
    const double p = hecke_parameter(q);
    // T is diagonal with the two roots of t^2 = 1 + p t; the weights make
    // tau(T) = 0.
    const double disc = std::sqrt(p * p + 4.0);
    const double hi = (p + disc) / 2.0;
    const double lo = (p - disc) / 2.0;
    FiniteDimAlgebra alg{{1, 1}};
    StateSpec st = StateSpec::weights({-lo / (hi - lo), hi / (hi - lo)});
    AlgebraElement t = AlgebraElement::diagonal(alg, {hi, lo});
    GnsRep rep(alg, st, {t});
    CMatrix exact(2, 2);
    exact << 0.0, 1.0, 1.0, p;
    return HeckeVertex{q, p, alg, st, t, std::move(rep), exact};
}

}  // namespace gplab
