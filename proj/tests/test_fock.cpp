#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gplab/fock.hpp"
#include "support/fock_oracle.hpp"

using namespace gplab;
using oracle::guarded_block;
using oracle::mixed_reps;
using oracle::random_centered;
using oracle::random_element;

namespace {

using Space = std::shared_ptr<const TruncatedFock>;

VertexId vid(std::uint32_t i) { return VertexId{i}; }

CVector basis_vector(const TruncatedFock& f, std::size_t p) {
    CVector e = CVector::Zero(f.dim());
    e[p] = 1.0;
    return e;
}

Complex omega(const CMatrix& x) { return x(0, 0); }

SimplicialGraph diamond() {
    return SimplicialGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 2}});
}

/// Q_w with Q_e read as the identity, the reading under which the action
/// identities hold at w = e.
OperatorMatrix q_symbol(const Space& f, const NormalForm& w) {
    return w.is_identity() ? OperatorMatrix::identity(f) : q_projection(f, w);
}

OperatorMatrix v_action(const Space& f, VertexId v, const NormalForm& w) {
    const CoxeterGroup& grp = f->group();
    NormalForm vw = grp.multiply(grp.generator(v), w);
    if (!grp.commutes_with(w, v)) return q_symbol(f, vw);
    if (grp.starts_with(v, w)) return q_symbol(f, vw) - q_symbol(f, w);
    return q_symbol(f, w);
}

}  // namespace

TEST(Fock, Dimensions) {
    auto hecke = hecke_vertex(2.0).rep;
    EXPECT_EQ(build_fock(SimplicialGraph::cycle(4), std::vector<std::size_t>{2, 3, 4, 2}, 0)->dim(), 1u);
    EXPECT_EQ(build_fock(SimplicialGraph::edgeless(3), std::vector<GnsRep>(3, hecke), 2)->dim(), 10u);
    FiniteDimAlgebra m2{{2}};
    EXPECT_EQ(build_fock(SimplicialGraph::edgeless(1), {gns(m2, StateSpec::normalized_trace(m2))}, 1)->dim(), 4u);

    auto f = build_fock(diamond(), std::vector<std::size_t>{2, 3, 2, 4}, 4);
    std::size_t expected = 0;
    for (const auto& w : f->group().ball(4)) {
        std::size_t block = 1;
        for (VertexId v : w.letters) block *= f->vertex_dim(v) - 1;
        expected += block;
    }
    EXPECT_EQ(f->dim(), expected);
    for (std::size_t p = 0; p < f->dim(); ++p) EXPECT_EQ(f->index_of(f->basis(p)), p);
    EXPECT_TRUE(f->basis(0).word.is_identity());
    EXPECT_THROW(build_fock(SimplicialGraph::edgeless(3), std::vector<std::size_t>{4, 4, 4}, 9), ResourceError);
}

TEST(Fock, LambdaMatchesFreeProductOracle) {
    std::mt19937_64 rng(11);
    auto reps = mixed_reps(4);
    std::vector<GnsRep> chosen{reps[1], reps[2], reps[3]};
    auto f = build_fock(SimplicialGraph::edgeless(3), chosen, 3);
    for (std::uint32_t v = 0; v < 3; ++v)
        for (int k = 0; k < 3; ++k) {
            CMatrix x = random_element(chosen[v], rng);
            EXPECT_LE((lambda_op(f, vid(v), x).dense() - oracle::free_product_lambda(*f, vid(v), x)).norm(), 1e-13);
        }
}

TEST(Fock, LambdaMatchesTensorOracle) {
    std::mt19937_64 rng(12);
    auto reps = mixed_reps(4);
    std::vector<GnsRep> chosen{reps[3], reps[1], reps[2]};
    auto f = build_fock(SimplicialGraph::complete(3), chosen, 3);
    for (std::uint32_t v = 0; v < 3; ++v) {
        CMatrix x = random_element(chosen[v], rng);
        EXPECT_LE((lambda_op(f, vid(v), x).dense() - oracle::tensor_lambda(*f, vid(v), x)).norm(), 1e-13);
    }
}

TEST(Fock, LambdaIsUnitalStarHomomorphismOnGuard) {
    std::mt19937_64 rng(13);
    auto reps = mixed_reps(4);
    auto f = build_fock(diamond(), reps, 4);
    for (std::uint32_t v = 0; v < 4; ++v) {
        CMatrix one = CMatrix::Identity(reps[v].dim(), reps[v].dim());
        EXPECT_EQ((lambda_op(f, vid(v), one).dense() - CMatrix::Identity(f->dim(), f->dim())).norm(), 0.0);
        for (int k = 0; k < 5; ++k) {
            CMatrix x = random_element(reps[v], rng);
            CMatrix y = random_element(reps[v], rng);
            auto lx = lambda_op(f, vid(v), x);
            auto ly = lambda_op(f, vid(v), y);
            EXPECT_EQ(lx.guard(), 3);
            EXPECT_LE(guarded_deviation(lambda_op(f, vid(v), x * y), lx * ly), 1e-12);
            EXPECT_LE((lambda_op(f, vid(v), x.adjoint()).dense() - lx.adjoint().dense()).norm(), 1e-13);
            // lambda_v(x) Omega is x xi_v on the word (v).
            CVector image = lx.apply(basis_vector(*f, 0));
            EXPECT_EQ(image[0], x(0, 0));
            for (std::uint32_t j = 1; j < reps[v].dim(); ++j)
                EXPECT_EQ(image[static_cast<Eigen::Index>(*f->position(f->group().generator(vid(v)), {j}))], x(j, 0));
        }
    }
}

TEST(Fock, CommutationRelations) {
    std::mt19937_64 rng(14);
    auto reps = mixed_reps(4);
    auto f = build_fock(diamond(), reps, 4);
    const auto& g = f->graph();
    for (std::uint32_t v = 0; v < 4; ++v)
        for (std::uint32_t u = 0; u < 4; ++u) {
            CMatrix x = random_element(reps[v], rng);
            CMatrix y = random_element(reps[u], rng);
            if (u != v) {
                auto lx = lambda_op(f, vid(v), x);
                auto ry = rho_op(f, vid(u), y);
                EXPECT_LE(guarded_deviation(lx * ry, ry * lx), 1e-9) << v << " " << u;
            }
            if (g.adjacent(vid(u), vid(v))) {
                auto lx = lambda_op(f, vid(v), x);
                auto ly = lambda_op(f, vid(u), y);
                EXPECT_LE(guarded_deviation(lx * ly, ly * lx), 1e-12);
            }
        }
}

TEST(Fock, RhoActsOnLastLeg) {
    std::mt19937_64 rng(15);
    auto reps = mixed_reps(4);
    std::vector<GnsRep> chosen{reps[1], reps[2], reps[3]};
    auto f = build_fock(SimplicialGraph::edgeless(3), chosen, 3);
    // On the edgeless graph rho is lambda conjugated by word reversal.
    std::vector<std::size_t> reversal(f->dim());
    for (std::size_t p = 0; p < f->dim(); ++p) {
        FockIndex idx = f->basis(p);
        std::reverse(idx.word.letters.begin(), idx.word.letters.end());
        std::reverse(idx.slots.begin(), idx.slots.end());
        reversal[p] = *f->index_of(idx);
    }
    for (std::uint32_t v = 0; v < 3; ++v) {
        CMatrix x = random_element(chosen[v], rng);
        CMatrix l = lambda_op(f, vid(v), x).dense();
        CMatrix r = rho_op(f, vid(v), x).dense();
        for (std::size_t i = 0; i < f->dim(); ++i)
            for (std::size_t j = 0; j < f->dim(); ++j)
                EXPECT_EQ(r(reversal[i], reversal[j]), l(i, j));
    }
}

TEST(Fock, HeckeGenerator) {
    for (double q : {0.25, 1.0, 3.0}) {
        auto hv = hecke_vertex(q);
        auto f = build_fock(SimplicialGraph::edgeless(3), std::vector<GnsRep>(3, hv.rep), 3);
        auto s = f->group().generator(vid(0));
        auto t = lambda_op(f, vid(0), hv.generator_matrix);
        auto ds = *f->position(s, {1});
        CVector from_vacuum = t.apply(basis_vector(*f, 0));
        EXPECT_EQ(from_vacuum, basis_vector(*f, ds));
        CVector from_s = t.apply(basis_vector(*f, ds));
        CVector expected = basis_vector(*f, 0) + hv.p * basis_vector(*f, ds);
        EXPECT_EQ(from_s, expected);
        EXPECT_LE((hv.rep.left_mult(hv.generator) - hv.generator_matrix).norm(), 1e-12);
    }
}

TEST(Fock, QProjections) {
    auto reps = mixed_reps(4);
    auto f = build_fock(diamond(), reps, 4);
    const auto& grp = f->group();
    const auto& g = f->graph();
    for (std::uint32_t v = 0; v < 4; ++v) {
        auto qv = q_projection(f, grp.generator(vid(v)));
        EXPECT_EQ(qv.apply(basis_vector(*f, 0)).norm(), 0.0);
        for (std::uint32_t u = 0; u < 4; ++u) {
            if (u == v) continue;
            auto qu = q_projection(f, grp.generator(vid(u)));
            CMatrix prod = (qv * qu).dense();
            if (g.adjacent(vid(u), vid(v))) {
                auto joined = grp.multiply(grp.generator(vid(v)), grp.generator(vid(u)));
                EXPECT_EQ((prod - q_projection(f, joined).dense()).norm(), 0.0);
            } else {
                EXPECT_EQ(prod.norm(), 0.0);
            }
        }
    }
    CMatrix qe = q_projection(f, grp.identity()).dense();
    CMatrix vacuum = p_projection(f, grp.identity()).dense();
    EXPECT_EQ((qe + vacuum - CMatrix::Identity(f->dim(), f->dim())).norm(), 0.0);
    EXPECT_THROW(q_projection(f, grp.parse({"a", "b", "d", "a", "b"})), DomainError);
}

TEST(Fock, ProjectionIdentities) {
    std::mt19937_64 rng(16);
    auto reps = mixed_reps(4);
    auto f = build_fock(diamond(), reps, 4);
    const auto& grp = f->group();
    for (std::uint32_t v = 0; v < 4; ++v) {
        const auto& rep = reps[v];
        CMatrix a = random_element(rep, rng);
        CMatrix a0 = centered_matrix(a);
        // Vacuum and a length-one tail not starting with v.
        std::vector<std::size_t> tails{0};
        for (std::uint32_t u = 0; u < 4; ++u)
            if (u != v) tails.push_back(*f->position(grp.generator(vid(u)), {1}));
        for (std::size_t tail : tails) {
            FockIndex eta = f->basis(tail);
            auto placed = [&](std::uint32_t j) {
                Word w{vid(v)};
                w.insert(w.end(), eta.word.letters.begin(), eta.word.letters.end());
                std::vector<std::uint32_t> s{j};
                s.insert(s.end(), eta.slots.begin(), eta.slots.end());
                auto order = grp.canonical_order(w);
                NormalForm nf;
                std::vector<std::uint32_t> ns;
                for (auto i : order) {
                    nf.letters.push_back(w[i]);
                    ns.push_back(s[i]);
                }
                return *f->position(nf, ns);
            };
            CVector xi = basis_vector(*f, tail);
            CVector expected = CVector::Zero(f->dim());
            for (std::uint32_t j = 1; j < rep.dim(); ++j) expected[placed(j)] = a0(j, 0);
            EXPECT_LE((creation(f, vid(v), a).apply(xi) - expected).norm(), 1e-14);
            EXPECT_EQ(diagonal(f, vid(v), a).apply(xi).norm(), 0.0);
            EXPECT_EQ(annihilation(f, vid(v), a).apply(xi).norm(), 0.0);

            CMatrix b = random_centered(rep, rng);
            CVector bxi = CVector::Zero(f->dim());
            for (std::uint32_t j = 1; j < rep.dim(); ++j) bxi[placed(j)] = b(j, 0);
            EXPECT_LE(creation(f, vid(v), a).apply(bxi).norm(), 1e-14);
            CMatrix ab0 = centered_matrix(a * b);
            CVector d_expected = CVector::Zero(f->dim());
            for (std::uint32_t j = 1; j < rep.dim(); ++j) d_expected[placed(j)] = ab0(j, 0);
            EXPECT_LE((diagonal(f, vid(v), a).apply(bxi) - d_expected).norm(), 1e-13);
            EXPECT_LE((annihilation(f, vid(v), a).apply(bxi) - omega(a * b) * xi).norm(), 1e-13);
        }
    }
}

class MainIdentities : public ::testing::TestWithParam<int> {};

TEST_P(MainIdentities, AllItems) {
    const SimplicialGraph graphs[] = {SimplicialGraph::path(3), SimplicialGraph::cycle(4), diamond()};
    const auto& g = graphs[GetParam()];
    auto reps = mixed_reps(g.size());
    auto f = build_fock(g, reps, 4);
    const auto& grp = f->group();
    std::mt19937_64 rng(100 + static_cast<unsigned>(GetParam()));
    const double tol = 1e-9;
    auto one = OperatorMatrix::identity(f);
    for (std::uint32_t v = 0; v < g.size(); ++v)
        for (std::uint32_t u = 0; u < g.size(); ++u) {
            const bool same = u == v;
            const bool adjacent = g.adjacent(vid(u), vid(v));
            for (int draw = 0; draw < 50; ++draw) {
                CMatrix a = random_element(reps[v], rng);
                CMatrix b = random_element(reps[u], rng);
                auto ad = creation(f, vid(v), a);
                auto bd = creation(f, vid(u), b);
                auto da = diagonal(f, vid(v), a);
                auto db = diagonal(f, vid(u), b);
                if (same) {
                    EXPECT_LE(guarded_norm(ad * bd), tol);
                    EXPECT_LE(guarded_norm(bd * da), tol);
                    CMatrix prod = a * b - omega(b) * a;
                    EXPECT_LE(guarded_deviation(da * bd, creation(f, vid(v), prod)), tol);
                    auto lhs = ad * bd.adjoint();
                    auto rhs = diagonal(f, vid(v), a * b.adjoint()) - da * diagonal(f, vid(v), b.adjoint());
                    EXPECT_LE(guarded_deviation(lhs, rhs), tol);
                    Complex c = omega(a.adjoint() * b) - std::conj(omega(a)) * omega(b);
                    auto perp = one - q_projection(f, grp.generator(vid(v)));
                    EXPECT_LE(guarded_deviation(ad.adjoint() * bd, c * perp), tol);
                } else if (adjacent) {
                    EXPECT_LE(guarded_deviation(ad * bd, bd * ad), tol);
                    EXPECT_LE(guarded_deviation(da * bd, bd * da), tol);
                    EXPECT_LE(guarded_deviation(ad.adjoint() * bd, bd * ad.adjoint()), tol);
                    EXPECT_LE(guarded_deviation(da * db, db * da), tol);
                } else {
                    EXPECT_LE(guarded_norm(da * bd), tol);
                    EXPECT_LE(guarded_norm(ad.adjoint() * bd), tol);
                    EXPECT_LE(guarded_norm(da * db), tol);
                }
            }
        }
    // Item 5 over every w with |w| <= 2.
    for (std::uint32_t v = 0; v < g.size(); ++v)
        for (const auto& w : grp.ball(2)) {
            for (int draw = 0; draw < 5; ++draw) {
                CMatrix a = random_centered(reps[v], rng);
                auto ad = creation(f, vid(v), a);
                auto qw = q_symbol(f, w);
                auto acted = v_action(f, vid(v), w);
                EXPECT_LE(guarded_deviation(qw * ad, ad * acted), tol) << grp.format(w);
                EXPECT_LE(guarded_deviation(qw * ad.adjoint(), ad.adjoint() * acted), tol) << grp.format(w);
            }
        }
}

INSTANTIATE_TEST_SUITE_P(Graphs, MainIdentities, ::testing::Values(0, 1, 2));

TEST(Fock, CreationMovesLengthByOne) {
    std::mt19937_64 rng(17);
    auto reps = mixed_reps(4);
    auto f = build_fock(diamond(), reps, 4);
    for (std::uint32_t v = 0; v < 4; ++v) {
        CMatrix a = random_element(reps[v], rng);
        auto check = [&](const OperatorMatrix& x, int shift) {
            for (Eigen::Index k = 0; k < x.matrix().outerSize(); ++k)
                for (SparseMatrix::InnerIterator it(x.matrix(), k); it; ++it)
                    EXPECT_EQ(static_cast<int>(f->length_at(static_cast<std::size_t>(it.row()))),
                              static_cast<int>(f->length_at(static_cast<std::size_t>(it.col()))) + shift);
        };
        check(creation(f, vid(v), a), 1);
        check(diagonal(f, vid(v), a), 0);
        check(annihilation(f, vid(v), a), -1);
        EXPECT_EQ(expectation_diag(diagonal(f, vid(v), a)).dense(), diagonal(f, vid(v), a).dense());
        EXPECT_EQ(vacuum_eval(diagonal(f, vid(v), a)), Complex(0.0));
        // Annihilation of a equals the adjoint of creation of a*.
        EXPECT_LE((annihilation(f, vid(v), a).dense() - creation(f, vid(v), a.adjoint()).adjoint().dense()).norm(), 1e-13);
    }
}

TEST(Fock, ConjugationAction) {
    std::mt19937_64 rng(18);
    for (const auto& g : {SimplicialGraph::path(3), diamond()}) {
        auto reps = mixed_reps(g.size());
        auto f = build_fock(g, reps, 4);
        const auto& grp = f->group();
        auto one = OperatorMatrix::identity(f);
        for (std::uint32_t v = 0; v < g.size(); ++v) {
            CMatrix a = random_centered(reps[v], rng);
            auto la = lambda_op(f, vid(v), a);
            const double w = omega(a * a.adjoint()).real();
            auto qv = q_projection(f, grp.generator(vid(v)));
            auto lhs = la.adjoint() * (one - qv) * la;
            auto diff = w * qv - lhs;
            EXPECT_GE(min_eigenvalue(guarded_block(diff, diff.guard())), -1e-9);
            for (const auto& word : grp.ball(2)) {
                if (word.is_identity() || grp.commutes_with(word, vid(v)) || grp.starts_with(vid(v), word)) continue;
                auto lhs2 = la.adjoint() * q_projection(f, word) * la;
                auto rhs2 = w * q_projection(f, grp.multiply(grp.generator(vid(v)), word));
                auto diff2 = rhs2 - lhs2;
                EXPECT_GE(min_eigenvalue(guarded_block(diff2, diff2.guard())), -1e-9) << grp.format(word);
            }
        }
    }
}

TEST(Fock, GaugeUnitary) {
    std::mt19937_64 rng(19);
    auto reps = mixed_reps(4);
    auto f = build_fock(diamond(), reps, 3);
    EXPECT_EQ((gauge_unitary(f, std::vector<Complex>(4, 1.0)).dense() - CMatrix::Identity(f->dim(), f->dim())).norm(), 0.0);
    auto flip = gauge_unitary(f, {-1.0, 1.0, 1.0, 1.0});
    for (std::size_t p = 0; p < f->dim(); ++p) {
        int count = 0;
        for (VertexId v : f->basis(p).word.letters) count += v.index == 0 ? 1 : 0;
        EXPECT_EQ(flip.matrix().coeff(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)), count % 2 ? -1.0 : 1.0);
    }
    EXPECT_THROW(gauge_unitary(f, {2.0, 1.0, 1.0, 1.0}), DomainError);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (std::uint32_t v = 0; v < 4; ++v) {
        std::vector<Complex> z;
        for (int i = 0; i < 4; ++i) z.push_back(std::polar(1.0, angle(rng)));
        auto u = gauge_unitary(f, z);
        auto ad = creation(f, vid(v), random_element(reps[v], rng));
        EXPECT_LE(((u * ad * u.adjoint()).dense() - (z[v] * ad).dense()).norm(), 1e-12);
    }
}

TEST(Fock, ExpectationProperties) {
    std::mt19937_64 rng(20);
    auto reps = mixed_reps(3);
    auto f = build_fock(SimplicialGraph::path(3), reps, 3);
    std::normal_distribution<double> normal;
    for (int k = 0; k < 20; ++k) {
        // A random word in lambda generators, so that E sees off-diagonal mass.
        auto x = OperatorMatrix::identity(f);
        for (int i = 0; i < 2; ++i) {
            std::uint32_t v = static_cast<std::uint32_t>(rng() % 3);
            x = x * lambda_op(f, vid(v), random_element(reps[v], rng)) + Complex(normal(rng), 0.0) * OperatorMatrix::identity(f);
        }
        auto e = expectation_diag(x);
        EXPECT_EQ((expectation_diag(e).dense() - e.dense()).norm(), 0.0);
        EXPECT_LE(operator_norm_dense(e.dense()), operator_norm_dense(x.dense()) + 1e-10);
        EXPECT_GE(min_eigenvalue(expectation_diag(x.adjoint() * x).dense()), -1e-10);
        EXPECT_LE((gauge_average(x, 2 * f->depth() + 1).dense() - e.dense()).norm(), 1e-12);
        EXPECT_EQ(gauge_average(x, 1).dense(), x.dense());
    }
    auto ad = creation(f, vid(0), random_element(reps[0], rng));
    EXPECT_EQ(expectation_diag(ad).matrix().nonZeros(), 0);
    EXPECT_LE(gauge_average(ad, 7).dense().norm(), 1e-12);
    // Same-vertex a d b* has trivial signature and is fixed by E.
    CMatrix a = random_centered(reps[1], rng);
    CMatrix b = random_centered(reps[1], rng);
    auto term = creation(f, vid(1), a) * diagonal(f, vid(1), random_element(reps[1], rng)) *
                creation(f, vid(1), b).adjoint();
    EXPECT_LE(guarded_deviation(expectation_diag(term), term), 1e-12);
}

TEST(Fock, GaugeAverageMatchesGridOracle) {
    std::mt19937_64 rng(21);
    auto reps = mixed_reps(2);
    auto f = build_fock(SimplicialGraph::edgeless(2), reps, 2);
    auto x = lambda_op(f, vid(0), random_element(reps[0], rng)) * lambda_op(f, vid(1), random_element(reps[1], rng));
    for (std::size_t m : {1u, 2u, 3u}) {
        CMatrix sum = CMatrix::Zero(f->dim(), f->dim());
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                auto u = gauge_unitary(f, {std::polar(1.0, 2.0 * std::numbers::pi * i / m),
                                           std::polar(1.0, 2.0 * std::numbers::pi * j / m)});
                sum += (u * x * u.adjoint()).dense();
            }
        sum /= static_cast<double>(m * m);
        EXPECT_LE((gauge_average(x, m).dense() - sum).norm(), 1e-12) << m;
    }
}

TEST(Fock, ExpectationFaithfulOnRandomOperators) {
    std::mt19937_64 rng(22);
    auto f = build_fock(SimplicialGraph::path(3), std::vector<std::size_t>{2, 3, 2}, 3);
    std::normal_distribution<double> normal;
    for (int k = 0; k < 100; ++k) {
        CMatrix dense(f->dim(), f->dim());
        for (Eigen::Index i = 0; i < dense.size(); ++i) dense.data()[i] = Complex(normal(rng), normal(rng));
        OperatorMatrix x(f, dense.sparseView(), static_cast<int>(f->depth()), 0);
        auto e = expectation_diag(x.adjoint() * x).dense();
        EXPECT_GT(e.trace().real(), 0.0);
        EXPECT_NEAR(e.trace().real(), dense.squaredNorm(), 1e-8 * dense.squaredNorm());
    }
}

TEST(Fock, ExpectationSubgraph) {
    std::mt19937_64 rng(23);
    auto reps = mixed_reps(4);
    auto f = build_fock(diamond(), reps, 4);
    const VertexMask keep = bit(vid(0)) | bit(vid(1));
    auto one = OperatorMatrix::identity(f);
    EXPECT_EQ((expectation_subgraph(one, keep).dense() - one.dense()).norm(), 0.0);
    for (std::uint32_t v = 0; v < 4; ++v) {
        CMatrix a = random_element(reps[v], rng);
        auto lx = lambda_op(f, vid(v), a);
        auto ex = expectation_subgraph(lx, keep);
        if ((keep & bit(vid(v))) != 0) {
            EXPECT_LE(guarded_deviation(ex, lx), 1e-12);
        } else {
            auto ad = creation(f, vid(v), a);
            EXPECT_LE(guarded_norm(expectation_subgraph(ad, keep)), 1e-12);
            // lambda_v(a) for v outside contributes omega(a).
            EXPECT_LE(guarded_deviation(ex, omega(a) * one), 1e-12);
        }
    }
    auto x = lambda_op(f, vid(0), random_element(reps[0], rng)) * lambda_op(f, vid(2), random_element(reps[2], rng)) *
             lambda_op(f, vid(1), random_element(reps[1], rng));
    auto ex = expectation_subgraph(x, keep);
    auto eex = expectation_subgraph(ex, keep);
    EXPECT_LE(guarded_deviation(eex, ex), 1e-12);
    EXPECT_LE(std::abs(vacuum_eval(ex) - vacuum_eval(x)), 1e-12);
    EXPECT_THROW(expectation_subgraph(x, SimplicialGraph::edgeless(2)), DomainError);
    EXPECT_LE(guarded_deviation(expectation_subgraph(x, SimplicialGraph::complete(2)), ex), 1e-12);
}

TEST(Fock, VacuumStateOnReducedOperators) {
    std::mt19937_64 rng(24);
    auto reps = mixed_reps(4);
    auto f = build_fock(diamond(), reps, 4);
    EXPECT_EQ(vacuum_eval(OperatorMatrix::identity(f)), Complex(1.0));
    const auto& grp = f->group();
    for (const auto& w : grp.ball(3)) {
        if (w.is_identity()) continue;
        auto x = OperatorMatrix::identity(f);
        for (VertexId v : w.letters) x = x * lambda_op(f, v, random_centered(reps[v.index], rng));
        EXPECT_LE(std::abs(vacuum_eval(x)), 1e-13) << grp.format(w);
    }
}

TEST(Fock, TailProfile) {
    std::mt19937_64 rng(25);
    auto reps = mixed_reps(4);
    auto f = build_fock(diamond(), reps, 3);
    auto ones = tail_profile(OperatorMatrix::identity(f));
    ASSERT_EQ(ones.size(), 3u);
    for (double t : ones) EXPECT_NEAR(t, 1.0, 1e-12);
    for (double t : tail_profile(p_projection(f, f->group().identity()))) EXPECT_EQ(t, 0.0);

    CMatrix a = random_element(reps[3], rng);
    auto ad = creation(f, vid(3), a);
    auto profile = tail_profile(ad);
    CMatrix e = expectation_diag(ad.adjoint() * ad).dense();
    for (std::size_t k = 0; k < profile.size(); ++k) {
        double expected = 0.0;
        for (std::size_t w = 0; w < f->words().size(); ++w) {
            if (f->words()[w].length() <= k || f->block_size(w) == 0) continue;
            auto off = static_cast<Eigen::Index>(f->word_offset(w));
            auto n = static_cast<Eigen::Index>(f->block_size(w));
            expected = std::max(expected, operator_norm_dense(e.block(off, off, n, n)));
        }
        EXPECT_NEAR(profile[k], expected, 1e-10);
        if (k > 0) EXPECT_LE(profile[k], profile[k - 1] + 1e-12);
        EXPECT_LE(profile[k], std::pow(operator_norm_dense(ad.dense()), 2) + 1e-10);
    }
}

TEST(Fock, TensorSplit) {
    auto hecke = hecke_vertex(2.0).rep;
    auto k2 = tensor_split_check(SimplicialGraph::complete(2), bit(vid(0)), std::vector<GnsRep>(2, hecke), 4);
    EXPECT_LE(k2.max_deviation, 1e-12);
    EXPECT_EQ(k2.generators_checked, 4u);

    auto reps = mixed_reps(4);
    std::vector<GnsRep> three{reps[3], reps[1], reps[2]};
    auto k3 = tensor_split_check(SimplicialGraph::complete(3), bit(vid(0)), three, 4);
    EXPECT_LE(k3.max_deviation, 1e-12);

    // Center of the path joined with the two non-adjacent ends.
    auto star = tensor_split_check(SimplicialGraph::path(3), bit(vid(1)), three, 4);
    EXPECT_LE(star.max_deviation, 1e-12);
    auto empty = tensor_split_check(SimplicialGraph::path(3), 0, three, 4);
    EXPECT_LE(empty.max_deviation, 1e-12);
    EXPECT_THROW(tensor_split_check(SimplicialGraph::path(3), bit(vid(0)), three, 4), DomainError);
}

TEST(Fock, TraceOnTracialVertices) {
    std::mt19937_64 rng(26);
    FiniteDimAlgebra m2{{2}};
    auto tr = gns(m2, StateSpec::normalized_trace(m2));
    auto c2 = gns(FiniteDimAlgebra{{1, 1}}, StateSpec::weights({0.5, 0.5}));
    auto f = build_fock(SimplicialGraph::path(3), {tr, c2, tr}, 4);
    std::vector<GnsRep> reps{tr, c2, tr};
    auto sample = [&]() {
        auto x = OperatorMatrix::identity(f);
        for (int i = 0; i < 2; ++i) {
            auto v = static_cast<std::uint32_t>(rng() % 3);
            x = x * lambda_op(f, vid(v), random_element(reps[v], rng));
        }
        return x;
    };
    for (int k = 0; k < 30; ++k) {
        auto x = sample();
        auto y = sample();
        EXPECT_LE(std::abs(vacuum_eval(x * y) - vacuum_eval(y * x)), 1e-10);
    }
}

TEST(Fock, ErrorPaths) {
    auto f = build_fock(SimplicialGraph::edgeless(2), std::vector<std::size_t>{2, 2}, 2);
    EXPECT_THROW(lambda_op(f, vid(0), CMatrix::Identity(3, 3)), DomainError);
    EXPECT_THROW(lambda_op(f, vid(5), CMatrix::Identity(2, 2)), GraphError);
    auto g = build_fock(SimplicialGraph::edgeless(2), std::vector<std::size_t>{2, 2}, 2);
    EXPECT_THROW(OperatorMatrix::identity(f) + OperatorMatrix::identity(g), DomainError);
}
