#include <gtest/gtest.h>

#include <random>

#include "gplab/coxeter.hpp"
#include "support/coxeter_oracle.hpp"

using namespace gplab;

namespace {

constexpr VertexId a{0}, b{1}, c{2};

NormalForm nf(std::initializer_list<VertexId> l) { return NormalForm{Word(l)}; }

std::vector<SimplicialGraph> test_graphs() {
    return {SimplicialGraph::edgeless(3), SimplicialGraph::complete(3), SimplicialGraph::path(3),
            SimplicialGraph::cycle(4)};
}

std::vector<std::vector<bool>> order_matrix(const CoxeterGroup& w, const std::vector<NormalForm>& ball) {
    std::vector<std::vector<bool>> le(ball.size(), std::vector<bool>(ball.size()));
    for (std::size_t i = 0; i < ball.size(); ++i)
        for (std::size_t j = 0; j < ball.size(); ++j) le[i][j] = w.starts_with(ball[i], ball[j]);
    return le;
}

}  // namespace

TEST(Coxeter, ReduceExamples) {
    CoxeterGroup e3(SimplicialGraph::edgeless(3));
    EXPECT_TRUE(e3.reduce(Word{a, a}).is_identity());
    EXPECT_EQ(e3.reduce(Word{a, b, a}), nf({a, b, a}));
    CoxeterGroup ab(SimplicialGraph::from_edges(2, {{0, 1}}));
    EXPECT_EQ(ab.reduce(Word{b, a}), nf({a, b}));
    EXPECT_THROW(e3.reduce(Word{VertexId{7}}), GraphError);
}

TEST(Coxeter, ReduceMatchesSearchOracleOnThreeVertexGraphs) {
    for (const auto& g : oracle::all_graphs(3)) {
        CoxeterGroup w(g);
        for (std::size_t len = 0; len <= 7; ++len)
            for (const Word& x : oracle::all_words(3, len)) {
                NormalForm r = w.reduce(x);
                ASSERT_EQ(r.letters, oracle::reduce_by_search(g, x));
                ASSERT_EQ(w.reduce(r.letters), r);
                ASSERT_LE(r.length(), x.size());
                ASSERT_EQ((x.size() - r.length()) % 2, 0u);
            }
    }
}

TEST(Coxeter, ReduceIsConstantOnClassesOfRandomWords) {
    std::mt19937_64 rng(20240611);
    for (std::size_t n = 2; n <= 5; ++n) {
        auto graphs = oracle::all_graphs(n);
        for (int trial = 0; trial < 400; ++trial) {
            const auto& g = graphs[rng() % graphs.size()];
            CoxeterGroup w(g);
            Word x(rng() % 11);
            for (auto& v : x) v = VertexId{static_cast<std::uint32_t>(rng() % n)};
            NormalForm want = w.reduce(x);
            Word y = x;
            for (int step = 0; step < 20; ++step) {
                if (rng() % 3 == 0) {
                    std::size_t i = rng() % (y.size() + 1);
                    VertexId s{static_cast<std::uint32_t>(rng() % n)};
                    y.insert(y.begin() + static_cast<std::ptrdiff_t>(i), {s, s});
                } else if (y.size() >= 2) {
                    std::size_t i = rng() % (y.size() - 1);
                    if (g.adjacent(y[i], y[i + 1])) std::swap(y[i], y[i + 1]);
                    else if (y[i] == y[i + 1]) y.erase(y.begin() + static_cast<std::ptrdiff_t>(i), y.begin() + static_cast<std::ptrdiff_t>(i) + 2);
                }
            }
            ASSERT_EQ(w.reduce(y), want);
            ASSERT_TRUE(oracle::tits_matrix(g, y).isApprox(oracle::tits_matrix(g, want.letters)));
        }
    }
}

TEST(Coxeter, CancellationLaw) {
    std::mt19937_64 rng(7);
    for (const auto& g : oracle::all_graphs(4)) {
        CoxeterGroup w(g);
        for (int trial = 0; trial < 30; ++trial) {
            Word x(rng() % 11);
            for (auto& v : x) v = VertexId{static_cast<std::uint32_t>(rng() % 4)};
            for (const auto& cut : w.cancellation_trace(x))
                for (VertexId t : cut.between) ASSERT_TRUE(g.adjacent(cut.letter, t));
        }
    }
}

TEST(Coxeter, UniquePermutationProperty) {
    // Swaps only exchange distinct adjacent letters, so tracking positions
    // through the class must reach each member with a single permutation,
    // and that permutation keeps equal letters in order.
    for (const auto& g : oracle::all_graphs(3)) {
        CoxeterGroup w(g);
        for (std::size_t len = 0; len <= 8; ++len)
            for (const Word& x : oracle::all_words(3, len)) {
                if (!w.is_reduced(x) || w.reduce(x).letters != x) continue;
                std::map<Word, std::vector<std::size_t>> reached;
                std::vector<std::size_t> id(x.size());
                for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
                reached[x] = id;
                std::vector<Word> todo{x};
                while (!todo.empty()) {
                    Word y = todo.back();
                    todo.pop_back();
                    auto perm = reached[y];
                    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
                        if (!g.adjacent(y[i], y[i + 1])) continue;
                        Word z = y;
                        auto p = perm;
                        std::swap(z[i], z[i + 1]);
                        std::swap(p[i], p[i + 1]);
                        auto it = reached.find(z);
                        if (it == reached.end()) {
                            reached[z] = p;
                            todo.push_back(z);
                        } else {
                            ASSERT_EQ(it->second, p);
                        }
                    }
                }
                for (const auto& [member, perm] : reached) {
                    ASSERT_TRUE(w.is_reduced(member));
                    for (std::size_t i = 0; i < perm.size(); ++i)
                        for (std::size_t j = i + 1; j < perm.size(); ++j)
                            if (member[i] == member[j]) ASSERT_LT(perm[i], perm[j]);
                }
                ASSERT_EQ(reached.size(), oracle::shuffle_class(g, x).size());
            }
    }
}

TEST(Coxeter, CanonicalOrderCarriesPayload) {
    CoxeterGroup w(SimplicialGraph::cycle(4));
    Word x{VertexId{3}, VertexId{1}, VertexId{0}};
    auto order = w.canonical_order(x);
    Word y;
    for (auto i : order) y.push_back(x[i]);
    EXPECT_EQ(y, w.reduce(x).letters);
}

TEST(Coxeter, MultiplyExamples) {
    for (const auto& g : test_graphs()) {
        CoxeterGroup w(g);
        auto x = w.reduce(Word{a, b});
        EXPECT_EQ(w.multiply(w.identity(), x), x);
        EXPECT_TRUE(w.multiply(nf({a}), nf({a})).is_identity());
        EXPECT_TRUE(w.multiply(x, w.reduce(Word{b, a})).is_identity());
    }
}

TEST(Coxeter, StartsWithExamples) {
    CoxeterGroup e3(SimplicialGraph::edgeless(3));
    for (const auto& x : e3.ball(3)) EXPECT_TRUE(e3.starts_with(e3.identity(), x));
    EXPECT_TRUE(e3.starts_with(nf({a}), nf({a, b})));
    EXPECT_FALSE(e3.starts_with(nf({b}), nf({a, b})));
    EXPECT_TRUE(e3.ends_with(nf({b}), nf({a, b})));
}

TEST(Coxeter, FirstLetters) {
    CoxeterGroup e3(SimplicialGraph::edgeless(3));
    EXPECT_EQ(e3.first_letters(e3.identity()), 0u);
    EXPECT_EQ(e3.first_letters(nf({a, b, a})), bit(a));
    CoxeterGroup ab(SimplicialGraph::from_edges(2, {{0, 1}}));
    EXPECT_EQ(ab.first_letters(nf({a, b})), bit(a) | bit(b));
    for (const auto& g : test_graphs()) {
        CoxeterGroup w(g);
        for (const auto& x : w.ball(4)) {
            VertexMask want = 0;
            for (VertexId s : g.vertices())
                if (w.starts_with(w.generator(s), x)) want |= bit(s);
            ASSERT_EQ(w.first_letters(x), want);
            for (VertexId s : members(want))
                for (VertexId t : members(want))
                    if (s != t) ASSERT_TRUE(g.adjacent(s, t));
        }
    }
}

TEST(Coxeter, JoinAndMeetExamples) {
    CoxeterGroup e3(SimplicialGraph::edgeless(3));
    EXPECT_EQ(e3.join(nf({a}), nf({a})), nf({a}));
    EXPECT_FALSE(e3.join(nf({a}), nf({b})));
    EXPECT_EQ(e3.meet(nf({a, b}), nf({a, c})), nf({a}));
    CoxeterGroup ab(SimplicialGraph::from_edges(2, {{0, 1}}));
    EXPECT_EQ(ab.join(nf({a}), nf({b})), nf({a, b}));
    EXPECT_EQ(ab.join(ab.identity(), nf({b})), nf({b}));
    EXPECT_TRUE(ab.meet(nf({a}), nf({b})).is_identity());
}

TEST(Coxeter, CommutesWith) {
    CoxeterGroup e3(SimplicialGraph::edgeless(3));
    EXPECT_TRUE(e3.commutes_with(e3.identity(), b));
    EXPECT_FALSE(e3.commutes_with(nf({a}), b));
    CoxeterGroup ab(SimplicialGraph::from_edges(2, {{0, 1}}));
    EXPECT_TRUE(ab.commutes_with(nf({a}), b));
}

TEST(Coxeter, SphereSizes) {
    EXPECT_EQ(CoxeterGroup(SimplicialGraph::edgeless(3)).sphere_sizes(3), (std::vector<std::uint64_t>{1, 3, 6, 12}));
    EXPECT_EQ(CoxeterGroup(SimplicialGraph::complete(3)).sphere_sizes(3), (std::vector<std::uint64_t>{1, 3, 3, 1}));
    EXPECT_EQ(CoxeterGroup(SimplicialGraph::cycle(4)).sphere_sizes(3), (std::vector<std::uint64_t>{1, 4, 8, 12}));
    for (const auto& g : {SimplicialGraph::path(4), SimplicialGraph::cycle(5), SimplicialGraph::edgeless(4)})
        EXPECT_EQ(CoxeterGroup(g).sphere_sizes(6), oracle::sphere_sizes_by_bfs(g, 6));
}

TEST(Coxeter, BallIsShortlexAndCapped) {
    CoxeterGroup w(SimplicialGraph::path(3));
    auto ball = w.ball(5);
    EXPECT_TRUE(std::is_sorted(ball.begin(), ball.end()));
    EXPECT_EQ(std::adjacent_find(ball.begin(), ball.end()), ball.end());
    EXPECT_THROW(w.ball(13), ResourceError);
    EXPECT_THROW(CoxeterGroup(SimplicialGraph::edgeless(4)).ball(12, {12, 1000}), ResourceError);
}

TEST(Coxeter, GroupAxiomsOnBallFour) {
    for (const auto& g : test_graphs()) {
        CoxeterGroup w(g);
        auto ball = w.ball(4);
        for (const auto& x : ball) {
            ASSERT_EQ(w.multiply(x, w.identity()), x);
            ASSERT_TRUE(w.multiply(x, w.inverse(x)).is_identity());
            for (const auto& y : ball) {
                auto xy = w.multiply(x, y);
                ASSERT_TRUE(oracle::tits_matrix(g, xy.letters)
                                .isApprox(oracle::tits_matrix(g, x.letters) * oracle::tits_matrix(g, y.letters)));
            }
        }
        for (std::size_t i = 0; i < ball.size(); i += 3)
            for (std::size_t j = 0; j < ball.size(); j += 2)
                for (std::size_t k = 0; k < ball.size(); k += 5)
                    ASSERT_EQ(w.multiply(w.multiply(ball[i], ball[j]), ball[k]),
                              w.multiply(ball[i], w.multiply(ball[j], ball[k])));
    }
}

TEST(Coxeter, WeakOrderIsPartialOrderOnBallSix) {
    for (const auto& g : {SimplicialGraph::edgeless(3), SimplicialGraph::path(3)}) {
        CoxeterGroup w(g);
        auto ball = w.ball(6);
        auto le = order_matrix(w, ball);
        for (std::size_t i = 0; i < ball.size(); ++i) {
            ASSERT_TRUE(le[i][i]);
            for (std::size_t j = 0; j < ball.size(); ++j) {
                if (i != j) ASSERT_FALSE(le[i][j] && le[j][i]);
                if (!le[i][j]) continue;
                for (std::size_t k = 0; k < ball.size(); ++k)
                    if (le[j][k]) ASSERT_TRUE(le[i][k]);
            }
        }
    }
}

TEST(Coxeter, MeetIsGreatestLowerBoundOnBallFive) {
    CoxeterGroup w(SimplicialGraph::path(3));
    auto ball = w.ball(5);
    auto le = order_matrix(w, ball);
    for (std::size_t i = 0; i < ball.size(); ++i)
        for (std::size_t j = 0; j < ball.size(); ++j) {
            auto m = w.meet(ball[i], ball[j]);
            auto pos = static_cast<std::size_t>(std::lower_bound(ball.begin(), ball.end(), m) - ball.begin());
            ASSERT_TRUE(le[pos][i] && le[pos][j]);
            for (std::size_t k = 0; k < ball.size(); ++k)
                if (le[k][i] && le[k][j]) ASSERT_TRUE(le[k][pos]);
        }
}

TEST(Coxeter, JoinAgreesWithBallSearch) {
    for (const auto& g : test_graphs()) {
        CoxeterGroup w(g);
        auto ball = w.ball(3);
        for (const auto& x : ball)
            for (const auto& y : ball) ASSERT_EQ(w.join(x, y), w.join_by_search(x, y));
    }
}
