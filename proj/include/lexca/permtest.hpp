#pragma once

// Permutation test for the first eigenvalue of the words x years table. The
// null hypothesis of no chronological structure is simulated by permuting
// the document -> year assignment (the multiset of year labels is shuffled
// over documents, so per-year document counts are preserved), re-aggregating
// and recording lambda_1 of the resulting CA. The p-value uses the add-one
// estimator (1 + #{replicate >= observed}) / (R + 1).
//
// RNG streams derive deterministically from (seed, replicate, attempt), so
// results are reproducible regardless of execution order. A replicate whose
// permutation leaves some year with zero tokens is retried on a fresh
// substream; retries are counted and capped.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "lexca/error.hpp"
#include "lexca/lexical_table.hpp"

namespace lexca {

// Eigenvalues below this are numerical noise and reported as exactly zero,
// so structureless corpora give a deterministic p-value of 1.
inline constexpr double k_lambda_noise_floor = 1e-14;
inline constexpr int k_max_permutation_attempts = 100;

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// splitmix64; tiny, portable, and plenty for shuffling.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Unbiased via rejection sampling.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

  private:
    std::uint64_t state_;
};

// Absorb the inputs one at a time with a mix round between each; combining
// two mixed words with xor is commutative and cancels equal inputs, which
// made distinct (seed, replicate) pairs share a stream.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t replicate,
                                    std::uint64_t attempt) {
    std::uint64_t h = mix64(seed);
    h = mix64(h + replicate);
    return mix64(h + attempt);
}

// std::shuffle is implementation-defined; a hand-rolled Fisher-Yates keeps
// permutations identical across standard libraries.
template <typename T>
inline void fisher_yates(std::vector<T>& v, SplitMix64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(v[i - 1], v[j]);
    }
}

// lambda_1 of the CA of an aggregated count matrix, via the largest
// eigenvalue of S^T S (categories are few, terms are many). Returns a
// negative value when some category has zero mass.
inline double lambda1_of_aggregate(const Eigen::MatrixXd& counts) {
    const double n = counts.sum();
    Eigen::VectorXd r = counts.rowwise().sum() / n;
    Eigen::VectorXd c = counts.colwise().sum().transpose() / n;
    if ((c.array() <= 0).any()) return -1.0;
    if ((r.array() <= 0).any()) return -1.0;
    Eigen::MatrixXd S = (counts / n - r * c.transpose());
    S = r.array().rsqrt().matrix().asDiagonal() * S * c.array().rsqrt().matrix().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S.transpose() * S,
                                                      Eigen::EigenvaluesOnly);
    double lambda = es.eigenvalues().maxCoeff();
    if (lambda < k_lambda_noise_floor) return 0.0;
    return lambda;
}

}  // namespace detail

struct PermTestResult {
    double observed_lambda1 = 0.0;
    std::vector<double> replicate_lambda1;  // length R
    double p_value = 1.0;
    int n_replicates = 0;
    std::uint64_t seed = 0;
    std::string alternative = "one-tail-greater";
    int n_retried_attempts = 0;  // permutations redrawn due to a zero-mass year
    std::string category_key;
};

inline PermTestResult first_eigenvalue_test(const Corpus& corpus, const LexicalTable& table,
                                            const std::string& year_key, int n_replicates,
                                            std::uint64_t seed) {
    if (n_replicates < 1) throw ArgumentError("permtest: replicates must be >= 1");
    if (table.cols() < 2) throw PreconditionError("permtest: need at least 2 terms");

    // Observed aggregation fixes category order and the doc -> category map.
    AggregatedTable agg = aggregate_by_category(table, corpus, year_key);
    const std::size_t n_cats = agg.cols();
    if (n_cats < 2) throw PreconditionError("permtest: need at least 2 distinct years");

    std::unordered_map<std::string, std::size_t> cat_index;
    for (std::size_t j = 0; j < n_cats; ++j) cat_index.emplace(agg.categories[j], j);
    std::unordered_map<std::string, const RawDocument*> by_id;
    for (const auto& d : corpus.documents) by_id.emplace(d.id, &d);
    std::vector<std::size_t> assignment(table.rows());
    for (std::size_t i = 0; i < table.rows(); ++i) {
        const RawDocument* doc = by_id.at(table.doc_ids()[i]);
        assignment[i] = cat_index.at(detail::category_value(*doc, year_key));
    }

    // Dense doc x category aggregation of the (sparse) doc rows.
    const auto n_terms = static_cast<Eigen::Index>(table.cols());
    auto aggregate = [&](const std::vector<std::size_t>& assign) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_terms, static_cast<Eigen::Index>(n_cats));
        table.for_each_entry([&](std::size_t i, std::size_t j, std::int64_t v) {
            m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(assign[i])) +=
                static_cast<double>(v);
        });
        return m;
    };

    PermTestResult result;
    result.n_replicates = n_replicates;
    result.seed = seed;
    result.category_key = year_key;
    result.observed_lambda1 = detail::lambda1_of_aggregate(aggregate(assignment));
    if (result.observed_lambda1 < 0) {
        throw PreconditionError("permtest: a year has zero token total in the observed table");
    }

    result.replicate_lambda1.resize(static_cast<std::size_t>(n_replicates));
    std::vector<std::size_t> permuted;
    int n_ge = 0;
    for (int rep = 0; rep < n_replicates; ++rep) {
        double lambda = -1.0;
        for (int attempt = 0; attempt < k_max_permutation_attempts; ++attempt) {
            detail::SplitMix64 rng(detail::substream_seed(
                seed, static_cast<std::uint64_t>(rep) + 1, static_cast<std::uint64_t>(attempt)));
            permuted = assignment;
            detail::fisher_yates(permuted, rng);
            lambda = detail::lambda1_of_aggregate(aggregate(permuted));
            if (lambda >= 0) break;
            ++result.n_retried_attempts;
        }
        if (lambda < 0) {
            throw PreconditionError("permtest: replicate " + std::to_string(rep + 1) +
                                    " found no permutation with all years non-empty after " +
                                    std::to_string(k_max_permutation_attempts) + " attempts");
        }
        result.replicate_lambda1[static_cast<std::size_t>(rep)] = lambda;
        if (lambda >= result.observed_lambda1) ++n_ge;
    }
    result.p_value = (1.0 + n_ge) / (static_cast<double>(n_replicates) + 1.0);
    return result;
}

struct Histogram {
    std::vector<double> bin_edges;  // size bins + 1
    std::vector<std::int64_t> counts;
};

inline Histogram histogram(const std::vector<double>& values, int bins) {
    if (bins < 1) throw ArgumentError("histogram: bins must be >= 1");
    Histogram h;
    if (values.empty()) return h;
    auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    double lo = *mn_it, hi = *mx_it;
    if (hi <= lo) hi = lo + 1.0;  // all equal: one wide bin still holds them
    h.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) {
        h.bin_edges[static_cast<std::size_t>(b)] = lo + (hi - lo) * b / bins;
    }
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * bins);
        if (b >= static_cast<std::size_t>(bins)) b = static_cast<std::size_t>(bins) - 1;
        ++h.counts[b];
    }
    return h;
}

}  // namespace lexca
