#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "lexca/charwords.hpp"

#include "oracles.hpp"

using namespace lexca;

TEST_CASE("worked tails: N=10, K=4, n=5") {
    HypergeomParams p{10, 4, 5};
    // upper tail at x=4: C(4,4)C(6,1)/C(10,5) = 6/252
    CHECK(hypergeom_tail_over(p, 4) == 6.0 / 252.0);
    // lower tail at x=2: (6 + 60 + 120)/252 = 186/252
    CHECK(hypergeom_tail_under(p, 2) == 186.0 / 252.0);
    CHECK(hypergeom_support_min(p) == 0);
    CHECK(hypergeom_support_max(p) == 4);

    // oracle agreement on the same numbers
    oracle::Hypergeom h(10);
    CHECK(h.tail_over(10, 4, 5, 4) == Catch::Approx(6.0 / 252.0).margin(1e-15));
    CHECK(h.tail_under(10, 4, 5, 2) == Catch::Approx(186.0 / 252.0).margin(1e-15));
}

TEST_CASE("tails clamp outside the support") {
    HypergeomParams p{10, 8, 8};
    CHECK(hypergeom_support_min(p) == 6);
    CHECK(hypergeom_support_max(p) == 8);
    CHECK(hypergeom_tail_over(p, 6) == 1.0);
    CHECK(hypergeom_tail_over(p, -3) == 1.0);
    CHECK(hypergeom_tail_over(p, 9) == 0.0);
    CHECK(hypergeom_tail_under(p, 8) == 1.0);
    CHECK(hypergeom_tail_under(p, 20) == 1.0);
    CHECK(hypergeom_tail_under(p, 5) == 0.0);

    CHECK_THROWS_AS(hypergeom_tail_over(HypergeomParams{0, 0, 0}, 0), PreconditionError);
    CHECK_THROWS_AS(hypergeom_tail_over(HypergeomParams{10, 11, 5}, 0), PreconditionError);
    CHECK_THROWS_AS(hypergeom_tail_over(HypergeomParams{10, 5, -1}, 0), PreconditionError);
    CHECK_THROWS_AS(hypergeom_tail_over(HypergeomParams{10, -1, 5}, 0), PreconditionError);
}

TEST_CASE("exhaustive small sweep agrees with the enumeration oracle") {
    oracle::Hypergeom h(25);
    for (int N = 1; N <= 25; ++N) {
        for (int K = 0; K <= N; ++K) {
            for (int n = 0; n <= N; ++n) {
                HypergeomParams p{N, K, n};
                int lo = static_cast<int>(hypergeom_support_min(p));
                int hi = static_cast<int>(hypergeom_support_max(p));
                for (int x = lo; x <= hi; ++x) {
                    INFO("N=" << N << " K=" << K << " n=" << n << " x=" << x);
                    CHECK(hypergeom_tail_over(p, x) ==
                          Catch::Approx(h.tail_over(N, K, n, x)).margin(1e-12));
                    CHECK(hypergeom_tail_under(p, x) ==
                          Catch::Approx(h.tail_under(N, K, n, x)).margin(1e-12));
                }
            }
        }
    }
}

TEST_CASE("complementarity and monotonicity hold across regimes") {
    oracle::Rng rng(4242);
    for (int trial = 0; trial < 400; ++trial) {
        // alternate between the exact regime and the log regime
        std::int64_t N = trial % 2 == 0 ? rng.range(2, 1000) : rng.range(1001, 20000);
        std::int64_t K = rng.range(0, static_cast<int>(N));
        std::int64_t n = rng.range(0, static_cast<int>(N));
        HypergeomParams p{N, K, n};
        std::int64_t lo = hypergeom_support_min(p);
        std::int64_t hi = hypergeom_support_max(p);
        std::int64_t x = lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
        INFO("N=" << N << " K=" << K << " n=" << n << " x=" << x);
        double over = hypergeom_tail_over(p, x);
        double under_prev = hypergeom_tail_under(p, x - 1);
        CHECK(over + under_prev == Catch::Approx(1.0).margin(1e-12));
        // widening the tail never shrinks it
        CHECK(hypergeom_tail_over(p, x + 1) <= over + 1e-15);
        CHECK(hypergeom_tail_under(p, x) >= under_prev - 1e-15);
    }
}

TEST_CASE("successes and draws are interchangeable") {
    oracle::Rng rng(555);
    for (int trial = 0; trial < 200; ++trial) {
        std::int64_t N = rng.range(2, 400);
        std::int64_t K = rng.range(0, static_cast<int>(N));
        std::int64_t n = rng.range(0, static_cast<int>(N));
        HypergeomParams p{N, K, n};
        HypergeomParams q{N, n, K};
        std::int64_t lo = hypergeom_support_min(p);
        std::int64_t hi = hypergeom_support_max(p);
        for (std::int64_t x = lo; x <= hi; ++x) {
            CHECK(hypergeom_tail_over(p, x) == hypergeom_tail_over(q, x));
            CHECK(hypergeom_tail_under(p, x) == hypergeom_tail_under(q, x));
        }
    }
}

TEST_CASE("log-space route matches exact rational sums, including past the resync point") {
    // N=2000 dispatches to the log route; the same sums are cheap to do
    // exactly, so compare them directly
    HypergeomParams p{2000, 1000, 1000};
    CHECK(hypergeom_tail_over(p, 520) ==
          Catch::Approx(detail::tail_exact(p, 520, 1000)).epsilon(1e-11));
    CHECK(hypergeom_tail_under(p, 480) ==
          Catch::Approx(detail::tail_exact(p, 0, 480)).epsilon(1e-11));
    // a tail longer than the resync interval
    CHECK(hypergeom_tail_over(p, 1) ==
          Catch::Approx(detail::tail_exact(p, 1, 1000)).epsilon(1e-11));
    CHECK(hypergeom_tail_under(p, 999) ==
          Catch::Approx(detail::tail_exact(p, 0, 999)).epsilon(1e-11));

    HypergeomParams q{5000, 240, 360};
    for (std::int64_t x : {5, 12, 17, 25, 40}) {
        std::int64_t hi = hypergeom_support_max(q);
        CHECK(hypergeom_tail_over(q, x) == Catch::Approx(detail::tail_exact(q, x, hi)).epsilon(1e-11));
        CHECK(hypergeom_tail_under(q, x) == Catch::Approx(detail::tail_exact(q, 0, x)).epsilon(1e-11));
    }
}

TEST_CASE("direction is decided by exact cross multiplication") {
    CHECK(classify_direction(HypergeomParams{10, 5, 4}, 3) == Direction::Over);   // 30 > 20
    CHECK(classify_direction(HypergeomParams{10, 5, 4}, 1) == Direction::Under);  // 10 < 20
    CHECK(classify_direction(HypergeomParams{10, 5, 4}, 2) == Direction::Neutral);
    // magnitudes whose cross products overflow 64 bits
    HypergeomParams big{4000000000000000000, 2000000000, 2000000000};
    CHECK(classify_direction(big, 1) == Direction::Neutral);  // 4e18 == 4e18
    CHECK(classify_direction(big, 0) == Direction::Under);
    CHECK(classify_direction(big, 3) == Direction::Over);  // 1.2e19 would wrap in 64 bits
}

TEST_CASE("test_term_part fills counts, direction and tail") {
    TermPartTest t = test_term_part(4, 4, 5, 10);
    CHECK(t.count == 4);
    CHECK(t.term_total == 4);
    CHECK(t.part_total == 5);
    CHECK(t.grand_total == 10);
    CHECK(t.direction == Direction::Over);
    CHECK(t.p_value == 6.0 / 252.0);

    TermPartTest u = test_term_part(2, 4, 5, 10);
    CHECK(u.direction == Direction::Neutral);  // 2*10 == 4*5
    CHECK(u.p_value == 1.0);

    TermPartTest v = test_term_part(0, 4, 5, 10);
    CHECK(v.direction == Direction::Under);
    CHECK(v.p_value == Catch::Approx(6.0 / 252.0).margin(1e-15));  // symmetric table

    CHECK_THROWS_AS(test_term_part(-1, 4, 5, 10), PreconditionError);
    CHECK_THROWS_AS(test_term_part(5, 4, 5, 10), PreconditionError);
    CHECK_THROWS_AS(test_term_part(0, 4, 5, 0), PreconditionError);
}

namespace {

AggregatedTable make_agg(std::vector<std::string> vocab, std::vector<std::string> categories,
                         std::vector<std::int64_t> counts, bool chronological = true) {
    AggregatedTable agg;
    agg.vocabulary = std::move(vocab);
    agg.categories = std::move(categories);
    agg.counts = std::move(counts);
    agg.category_key = chronological ? "year" : "country";
    agg.chronological = chronological;
    agg.recompute_totals();
    return agg;
}

}  // namespace

TEST_CASE("characteristic words on the symmetric 2x2 table") {
    AggregatedTable agg = make_agg({"a", "b"}, {"2005", "2006"}, {9, 1, 1, 9});
    CharacteristicWordsResult r = characteristic_words(agg, 0.05);
    CHECK(r.n_tests == 4);
    CHECK(r.alpha == 0.05);
    REQUIRE(r.by_part.size() == 2);
    REQUIRE(r.by_part[0].size() == 2);
    REQUIRE(r.by_part[1].size() == 2);

    const double expected_p = 101.0 / 184756.0;  // both tails, by symmetry
    CHECK(r.by_part[0][0].test.p_value == Catch::Approx(expected_p).margin(1e-15));
    // ties on p fall back to term order
    CHECK(r.by_part[0][0].term == "a");
    CHECK(r.by_part[0][0].test.direction == Direction::Over);
    CHECK(r.by_part[0][1].term == "b");
    CHECK(r.by_part[0][1].test.direction == Direction::Under);
    CHECK(r.by_part[1][0].term == "a");
    CHECK(r.by_part[1][0].test.direction == Direction::Under);
    CHECK(r.by_part[1][1].test.direction == Direction::Over);
}

TEST_CASE("uniform tables produce no characteristic words") {
    AggregatedTable agg = make_agg({"a", "b"}, {"2005", "2006"}, {5, 5, 5, 5});
    CharacteristicWordsResult r = characteristic_words(agg, 0.5);
    CHECK(r.by_part[0].empty());
    CHECK(r.by_part[1].empty());
}

TEST_CASE("a single part makes every term neutral") {
    AggregatedTable agg = make_agg({"a", "b", "c"}, {"2005"}, {3, 9, 2});
    CharacteristicWordsResult r = characteristic_words(agg, 0.9);
    CHECK(r.by_part[0].empty());
    CHECK(r.n_tests == 3);
}

TEST_CASE("characteristic_words validates alpha and the table") {
    AggregatedTable agg = make_agg({"a"}, {"2005", "2006"}, {1, 2});
    CHECK_THROWS_AS(characteristic_words(agg, 0.0), ArgumentError);
    CHECK_THROWS_AS(characteristic_words(agg, 1.0), ArgumentError);
    CHECK_THROWS_AS(characteristic_words(agg, -0.1), ArgumentError);
    CHECK_THROWS_AS(characteristic_words(AggregatedTable{}, 0.05), PreconditionError);
}

TEST_CASE("chronological words report minimum-p windows with year-range labels") {
    // "burst" concentrates in 2006-2007, "anti" mirrors it, columns stay even
    AggregatedTable agg = make_agg({"anti", "burst"}, {"2005", "2006", "2007", "2008"},
                                   {14, 1, 1, 14,
                                    1, 14, 14, 1});
    ChronologicalWordsResult r = chronological_words(agg, 0.05, 4);
    CHECK(r.max_window == 4);
    CHECK(r.n_tests == 2 * (4 + 3 + 2 + 1));
    REQUIRE(r.words.size() == 2);

    // both minimum windows are 2006-2007 with mirrored directions and, by
    // symmetry of the table, the exact same tail; the term breaks the tie
    CHECK(r.words[0].term == "anti");
    CHECK(r.words[1].term == "burst");
    CHECK(r.words[0].test.p_value == r.words[1].test.p_value);
    for (const ChronologicalWord& w : r.words) {
        CHECK(w.window_start == 1);
        CHECK(w.window_width == 2);
        CHECK(w.window_label == "2006-2007");
        CHECK(w.test.part_total == 30);
    }
    CHECK(r.words[0].test.direction == Direction::Under);
    CHECK(r.words[0].test.count == 2);
    CHECK(r.words[1].test.direction == Direction::Over);
    CHECK(r.words[1].test.count == 28);

    // the reported window really is the arg-min over all windows
    for (std::size_t term = 0; term < 2; ++term) {
        double best = 2.0;
        for (std::size_t width = 1; width <= 4; ++width) {
            for (std::size_t start = 0; start + width <= 4; ++start) {
                std::int64_t x = 0, n_window = 0;
                for (std::size_t j = start; j < start + width; ++j) {
                    x += agg.at(term, j);
                    n_window += agg.column_totals[j];
                }
                best = std::min(best, test_term_part(x, agg.row_totals[term], n_window,
                                                     agg.grand_total).p_value);
            }
        }
        CHECK(r.words[term].test.p_value == best);
    }
}

TEST_CASE("single-year windows get plain year labels and ties prefer narrow-then-early") {
    AggregatedTable agg = make_agg({"pad", "spike"}, {"2004", "2005", "2006"},
                                   {10, 10, 10,
                                    20, 1, 1});
    ChronologicalWordsResult r = chronological_words(agg, 0.05, 2);
    REQUIRE(r.words.size() == 2);
    // "pad" is depleted in 2004 exactly as strongly as "spike" is enriched;
    // wider windows tie but never displace the first width-1 hit
    for (const ChronologicalWord& w : r.words) {
        CHECK(w.window_width == 1);
        CHECK(w.window_start == 0);
        CHECK(w.window_label == "2004");
    }
    CHECK(r.words[0].term == "pad");
    CHECK(r.words[0].test.direction == Direction::Under);
    CHECK(r.words[1].term == "spike");
    CHECK(r.words[1].test.direction == Direction::Over);
}

TEST_CASE("chronological_words validates inputs") {
    AggregatedTable by_country = make_agg({"a"}, {"NL", "US"}, {1, 2}, false);
    CHECK_THROWS_AS(chronological_words(by_country, 0.05, 2), PreconditionError);
    AggregatedTable agg = make_agg({"a"}, {"2005", "2006"}, {1, 2});
    CHECK_THROWS_AS(chronological_words(agg, 0.0, 2), ArgumentError);
    CHECK_THROWS_AS(chronological_words(agg, 1.0, 2), ArgumentError);
    CHECK_THROWS_AS(chronological_words(agg, 0.05, 0), ArgumentError);
    // window wider than the part count clamps
    ChronologicalWordsResult r = chronological_words(agg, 0.5, 99);
    CHECK(r.max_window == 2);
}

TEST_CASE("max_window of one reduces to per-part tests with min-p selection") {
    oracle::Rng rng(808);
    const double alpha = 0.8;
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t n_terms = 2 + rng.below(6);
        std::size_t n_years = 2 + rng.below(4);
        std::vector<std::string> vocab, years;
        for (std::size_t i = 0; i < n_terms; ++i) vocab.push_back("w" + std::to_string(i));
        for (std::size_t j = 0; j < n_years; ++j) years.push_back(std::to_string(2000 + j));
        std::vector<std::int64_t> counts(n_terms * n_years);
        for (auto& v : counts) v = static_cast<std::int64_t>(rng.below(9));
        AggregatedTable agg = make_agg(vocab, years, counts);
        if (agg.grand_total == 0) continue;

        ChronologicalWordsResult chrono = chronological_words(agg, alpha, 1);
        CharacteristicWordsResult cw = characteristic_words(agg, 1.0 - 1e-12);
        CHECK(chrono.n_tests == cw.n_tests);

        // reduce the per-part lists to one minimum-p row per term,
        // earliest part winning ties
        struct Best {
            std::size_t part = 0;
            TermPartTest test;
            bool set = false;
        };
        std::map<std::string, Best> best;
        for (std::size_t j = 0; j < agg.cols(); ++j) {
            for (const auto& word : cw.by_part[j]) {
                Best& b = best[word.term];
                if (!b.set || word.test.p_value < b.test.p_value) {
                    b.set = true;
                    b.part = j;
                    b.test = word.test;
                }
            }
        }
        std::vector<const ChronologicalWord*> expected_hits;
        for (const auto& [term, b] : best) {
            if (b.test.p_value <= alpha) expected_hits.push_back(nullptr);
        }
        CHECK(chrono.words.size() == expected_hits.size());
        for (const ChronologicalWord& w : chrono.words) {
            REQUIRE(best.count(w.term) == 1);
            const Best& b = best[w.term];
            CHECK(w.window_width == 1);
            CHECK(w.window_start == b.part);
            CHECK(w.window_label == agg.categories[b.part]);
            CHECK(w.test.p_value == b.test.p_value);
            CHECK(w.test.count == b.test.count);
            CHECK(w.test.direction == b.test.direction);
            CHECK(w.test.part_total == b.test.part_total);
        }
    }
}
