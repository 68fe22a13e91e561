#pragma once

// Characteristic vocabulary by hypergeometric tail tests. For a term with
// corpus frequency K inside a corpus of N tokens, a part (a year, a country)
// holding n tokens, and an observed in-part count x, the null model is
// sampling n tokens without replacement:
//
//     h(t) = C(K, t) C(N - K, n - t) / C(N, n)
//
// Over-represented terms are scored by the upper tail P[X >= x], under-
// represented ones by the lower tail P[X <= x]; the support bounds are
// max(0, n + K - N) and min(n, K). Direction is decided exactly by cross
// multiplication of x N against K n.
//
// Totals up to k_exact_max_total are summed in exact rational arithmetic.
// Larger problems switch to log-gamma evaluation with a multiplicative
// recurrence along the tail, Kahan summation, and a periodic resync against
// lgamma to stop drift on long tails.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lexca/error.hpp"
#include "lexca/lexical_table.hpp"

namespace lexca {

struct HypergeomParams {
    std::int64_t total = 0;       // N
    std::int64_t successes = 0;   // K
    std::int64_t draws = 0;       // n
};

inline constexpr std::int64_t k_exact_max_total = 1000;

namespace detail {

inline void check_hypergeom(const HypergeomParams& p) {
    if (p.total <= 0) throw PreconditionError("hypergeometric: population must be positive");
    if (p.successes < 0 || p.successes > p.total) {
        throw PreconditionError("hypergeometric: successes outside [0, population]");
    }
    if (p.draws < 0 || p.draws > p.total) {
        throw PreconditionError("hypergeometric: draws outside [0, population]");
    }
}

inline boost::multiprecision::cpp_int binomial_exact(std::int64_t n, std::int64_t k) {
    using boost::multiprecision::cpp_int;
    if (k < 0 || k > n) return cpp_int(0);
    k = std::min(k, n - k);
    cpp_int result = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;  // exact: product of i consecutive integers is divisible by i!
    }
    return result;
}

inline double tail_exact(const HypergeomParams& p, std::int64_t lo, std::int64_t hi) {
    using boost::multiprecision::cpp_int;
    using boost::multiprecision::cpp_rational;
    cpp_int numerator = 0;
    for (std::int64_t t = lo; t <= hi; ++t) {
        numerator += binomial_exact(p.successes, t) * binomial_exact(p.total - p.successes, p.draws - t);
    }
    cpp_rational tail(numerator, binomial_exact(p.total, p.draws));
    return tail.convert_to<double>();
}

// Tail mass for t in [a, b] as a share of the whole distribution. One
// ratio recurrence anchored at the mode (value 1) generates every term;
// the tail and the total are compensated sums over the same terms, so
// the unknown absolute scale cancels in the quotient. Anchoring at the
// largest term also means no boundary underflow can wipe out a big tail.
inline double tail_ratio(const HypergeomParams& p, std::int64_t a, std::int64_t b) {
    const std::int64_t lo = std::max<std::int64_t>(0, p.draws + p.successes - p.total);
    const std::int64_t hi = std::min(p.draws, p.successes);
    const double other = static_cast<double>(p.total - p.successes - p.draws);
    auto mode_estimate = static_cast<std::int64_t>(
        static_cast<double>(p.draws + 1) * static_cast<double>(p.successes + 1) /
        static_cast<double>(p.total + 2));
    const std::int64_t mode = std::clamp(mode_estimate, lo, hi);

    double total = 0.0, total_c = 0.0;
    double tail = 0.0, tail_c = 0.0;
    auto add = [&](std::int64_t t, double term) {
        double y = term - total_c;
        double s = total + y;
        total_c = (s - total) - y;
        total = s;
        if (t >= a && t <= b) {
            double z = term - tail_c;
            double u = tail + z;
            tail_c = (u - tail) - z;
            tail = u;
        }
    };

    add(mode, 1.0);
    double term = 1.0;
    for (std::int64_t t = mode; t < hi; ++t) {
        // h(t+1) / h(t)
        term *= static_cast<double>(p.successes - t) * static_cast<double>(p.draws - t) /
                (static_cast<double>(t + 1) * (other + static_cast<double>(t + 1)));
        if (term < 1e-305) break;  // the rest is below any tolerance
        add(t + 1, term);
    }
    term = 1.0;
    for (std::int64_t t = mode; t > lo; --t) {
        // h(t-1) / h(t)
        term *= static_cast<double>(t) * (other + static_cast<double>(t)) /
                (static_cast<double>(p.successes - t + 1) * static_cast<double>(p.draws - t + 1));
        if (term < 1e-305) break;
        add(t - 1, term);
    }
    return std::min(tail / total, 1.0);
}

inline double tail_sum(const HypergeomParams& p, std::int64_t lo, std::int64_t hi) {
    if (lo > hi) return 0.0;
    if (p.total <= k_exact_max_total) return tail_exact(p, lo, hi);
    return tail_ratio(p, lo, hi);
}

}  // namespace detail

inline std::int64_t hypergeom_support_min(const HypergeomParams& p) {
    return std::max<std::int64_t>(0, p.draws + p.successes - p.total);
}

inline std::int64_t hypergeom_support_max(const HypergeomParams& p) {
    return std::min(p.draws, p.successes);
}

// P[X >= x]; 1 when x is at or below the support, 0 above it.
inline double hypergeom_tail_over(const HypergeomParams& p, std::int64_t x) {
    detail::check_hypergeom(p);
    const std::int64_t lo = hypergeom_support_min(p);
    const std::int64_t hi = hypergeom_support_max(p);
    if (x <= lo) return 1.0;
    if (x > hi) return 0.0;
    return detail::tail_sum(p, x, hi);
}

// P[X <= x]; 1 when x is at or above the support, 0 below it.
inline double hypergeom_tail_under(const HypergeomParams& p, std::int64_t x) {
    detail::check_hypergeom(p);
    const std::int64_t lo = hypergeom_support_min(p);
    const std::int64_t hi = hypergeom_support_max(p);
    if (x >= hi) return 1.0;
    if (x < lo) return 0.0;
    return detail::tail_sum(p, lo, x);
}

enum class Direction { Over, Under, Neutral };

inline const char* to_string(Direction d) {
    switch (d) {
        case Direction::Over: return "over";
        case Direction::Under: return "under";
        default: return "neutral";
    }
}

// Exact comparison of x / n against K / N via cross multiplication.
inline Direction classify_direction(const HypergeomParams& p, std::int64_t x) {
    const auto lhs = static_cast<__int128>(x) * p.total;
    const auto rhs = static_cast<__int128>(p.successes) * p.draws;
    if (lhs > rhs) return Direction::Over;
    if (lhs < rhs) return Direction::Under;
    return Direction::Neutral;
}

struct TermPartTest {
    std::int64_t count = 0;        // x
    std::int64_t term_total = 0;   // K
    std::int64_t part_total = 0;   // n
    std::int64_t grand_total = 0;  // N
    Direction direction = Direction::Neutral;
    double p_value = 1.0;
};

inline TermPartTest test_term_part(std::int64_t x, std::int64_t term_total,
                                   std::int64_t part_total, std::int64_t grand_total) {
    HypergeomParams params{grand_total, term_total, part_total};
    detail::check_hypergeom(params);
    if (x < 0 || x > std::min(term_total, part_total)) {
        throw PreconditionError("characteristic test: cell count outside the support");
    }
    TermPartTest t;
    t.count = x;
    t.term_total = term_total;
    t.part_total = part_total;
    t.grand_total = grand_total;
    t.direction = classify_direction(params, x);
    switch (t.direction) {
        case Direction::Over: t.p_value = hypergeom_tail_over(params, x); break;
        case Direction::Under: t.p_value = hypergeom_tail_under(params, x); break;
        case Direction::Neutral: t.p_value = 1.0; break;
    }
    return t;
}

struct CharacteristicWord {
    std::string term;
    std::string part;
    TermPartTest test;
};

struct CharacteristicWordsResult {
    std::vector<std::string> parts;
    // by_part[p]: significant words of parts[p], most significant first.
    std::vector<std::vector<CharacteristicWord>> by_part;
    double alpha = 0.0;
    // Tests performed (terms x parts), for anyone applying their own
    // multiple-testing correction downstream.
    std::size_t n_tests = 0;
};

// All (term, part) cells with tail probability <= alpha. Within a part the
// list is ordered by ascending p, ties broken by term.
inline CharacteristicWordsResult characteristic_words(const AggregatedTable& agg, double alpha) {
    if (!(alpha > 0 && alpha < 1)) {
        throw ArgumentError("characteristic_words: alpha must lie in (0, 1)");
    }
    if (agg.grand_total <= 0) throw PreconditionError("characteristic_words: empty table");
    CharacteristicWordsResult result;
    result.parts = agg.categories;
    result.alpha = alpha;
    result.n_tests = agg.rows() * agg.cols();
    result.by_part.resize(agg.cols());
    for (std::size_t j = 0; j < agg.cols(); ++j) {
        for (std::size_t i = 0; i < agg.rows(); ++i) {
            TermPartTest t = test_term_part(agg.at(i, j), agg.row_totals[i], agg.column_totals[j],
                                            agg.grand_total);
            if (t.p_value <= alpha) {
                result.by_part[j].push_back({agg.vocabulary[i], agg.categories[j], t});
            }
        }
        std::sort(result.by_part[j].begin(), result.by_part[j].end(),
                  [](const CharacteristicWord& a, const CharacteristicWord& b) {
                      if (a.test.p_value != b.test.p_value) return a.test.p_value < b.test.p_value;
                      return a.term < b.term;
                  });
    }
    return result;
}

struct ChronologicalWord {
    std::string term;
    std::size_t window_start = 0;  // index into parts
    std::size_t window_width = 1;
    std::string window_label;      // "2004" or "2004-2006"
    TermPartTest test;
};

struct ChronologicalWordsResult {
    std::vector<std::string> parts;  // chronologically ascending
    std::vector<ChronologicalWord> words;  // ascending p, then term
    double alpha = 0.0;
    std::size_t max_window = 1;
    std::size_t n_tests = 0;  // terms x windows examined
};

// For every term, scans all windows of 1..max_window consecutive parts and
// keeps the window with the smallest tail probability. Ties prefer narrower
// and then earlier windows, so max_window = 1 reduces to the per-part test
// with the earliest part winning ties.
inline ChronologicalWordsResult chronological_words(const AggregatedTable& agg, double alpha,
                                                    std::size_t max_window) {
    if (!agg.chronological) {
        throw PreconditionError("chronological_words: table is not aggregated by year");
    }
    if (!(alpha > 0 && alpha < 1)) {
        throw ArgumentError("chronological_words: alpha must lie in (0, 1)");
    }
    if (max_window < 1) throw ArgumentError("chronological_words: max_window must be >= 1");
    if (agg.grand_total <= 0) throw PreconditionError("chronological_words: empty table");

    const std::size_t n_parts = agg.cols();
    const std::size_t widest = std::min(max_window, n_parts);

    // Prefix sums over columns make window totals O(1).
    std::vector<std::int64_t> part_prefix(n_parts + 1, 0);
    for (std::size_t j = 0; j < n_parts; ++j) {
        part_prefix[j + 1] = part_prefix[j] + agg.column_totals[j];
    }

    ChronologicalWordsResult result;
    result.parts = agg.categories;
    result.alpha = alpha;
    result.max_window = widest;

    std::vector<std::int64_t> row_prefix(n_parts + 1);
    for (std::size_t i = 0; i < agg.rows(); ++i) {
        row_prefix[0] = 0;
        for (std::size_t j = 0; j < n_parts; ++j) {
            row_prefix[j + 1] = row_prefix[j] + agg.at(i, j);
        }
        bool have_best = false;
        ChronologicalWord best;
        for (std::size_t w = 1; w <= widest; ++w) {
            for (std::size_t start = 0; start + w <= n_parts; ++start) {
                std::int64_t x = row_prefix[start + w] - row_prefix[start];
                std::int64_t n_window = part_prefix[start + w] - part_prefix[start];
                TermPartTest t =
                    test_term_part(x, agg.row_totals[i], n_window, agg.grand_total);
                ++result.n_tests;
                if (!have_best || t.p_value < best.test.p_value) {
                    have_best = true;
                    best.term = agg.vocabulary[i];
                    best.window_start = start;
                    best.window_width = w;
                    best.window_label =
                        w == 1 ? agg.categories[start]
                               : agg.categories[start] + "-" + agg.categories[start + w - 1];
                    best.test = t;
                }
            }
        }
        if (have_best && best.test.p_value <= alpha) {
            result.words.push_back(std::move(best));
        }
    }
    std::sort(result.words.begin(), result.words.end(),
              [](const ChronologicalWord& a, const ChronologicalWord& b) {
                  if (a.test.p_value != b.test.p_value) return a.test.p_value < b.test.p_value;
                  if (a.term != b.term) return a.term < b.term;
                  return a.window_start < b.window_start;
              });
    return result;
}

}  // namespace lexca
