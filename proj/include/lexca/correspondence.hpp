#pragma once

// Correspondence analysis of a nonnegative count matrix N with grand total
// n. With P = N/n, row masses r and column masses c, the standardized
// residuals are
//
//     S_ij = (P_ij - r_i c_j) / sqrt(r_i c_j)
//
// and the SVD S = U diag(sigma) V^T yields eigenvalues lambda_k = sigma_k^2,
// principal coordinates F_ik = sigma_k U_ik / sqrt(r_i) and
// G_jk = sigma_k V_jk / sqrt(c_j). Total inertia is chi^2 / n. Axis signs
// are fixed by forcing the largest-magnitude loading of each right singular
// vector positive, so coordinates are reproducible across runs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "lexca/error.hpp"
#include "lexca/lexical_table.hpp"

namespace lexca {

struct CAInput {
    Eigen::MatrixXd counts;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::string source;
};

inline CAInput ca_input_from_table(const LexicalTable& table) {
    CAInput input;
    input.counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(table.rows()),
                                         static_cast<Eigen::Index>(table.cols()));
    table.for_each_entry([&](std::size_t i, std::size_t j, std::int64_t v) {
        input.counts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            static_cast<double>(v);
    });
    input.row_labels = table.doc_ids();
    input.col_labels = table.vocabulary();
    input.source = "lexical_table";
    return input;
}

inline CAInput ca_input_from_aggregated(const AggregatedTable& agg) {
    CAInput input;
    input.counts = Eigen::MatrixXd(static_cast<Eigen::Index>(agg.rows()),
                                   static_cast<Eigen::Index>(agg.cols()));
    for (std::size_t i = 0; i < agg.rows(); ++i) {
        for (std::size_t j = 0; j < agg.cols(); ++j) {
            input.counts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                static_cast<double>(agg.at(i, j));
        }
    }
    input.row_labels = agg.vocabulary;
    input.col_labels = agg.categories;
    input.source = "aggregated:" + agg.category_key;
    return input;
}

// Removes all-zero rows in place; returns the labels of removed rows.
inline std::vector<std::string> drop_zero_rows(CAInput& input) {
    std::vector<std::string> dropped;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < input.counts.rows(); ++i) {
        if (input.counts.row(i).sum() > 0) {
            keep.push_back(i);
        } else {
            dropped.push_back(i < static_cast<Eigen::Index>(input.row_labels.size())
                                  ? input.row_labels[static_cast<std::size_t>(i)]
                                  : "row " + std::to_string(i));
        }
    }
    if (dropped.empty()) return dropped;
    Eigen::MatrixXd reduced(static_cast<Eigen::Index>(keep.size()), input.counts.cols());
    std::vector<std::string> labels;
    labels.reserve(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
        reduced.row(static_cast<Eigen::Index>(k)) = input.counts.row(keep[k]);
        if (keep[k] < static_cast<Eigen::Index>(input.row_labels.size())) {
            labels.push_back(input.row_labels[static_cast<std::size_t>(keep[k])]);
        }
    }
    input.counts = std::move(reduced);
    input.row_labels = std::move(labels);
    return dropped;
}

struct CAModel {
    Eigen::VectorXd row_masses;       // r, sums to 1
    Eigen::VectorXd col_masses;       // c, sums to 1
    Eigen::VectorXd singular_values;  // sigma_k, kept axes
    Eigen::VectorXd eigenvalues;      // lambda_k = sigma_k^2, descending
    Eigen::MatrixXd row_coords;       // F, rows x kept
    Eigen::MatrixXd col_coords;       // G, cols x kept
    Eigen::MatrixXd row_contrib;      // r_i F_ik^2 / lambda_k
    Eigen::MatrixXd col_contrib;
    Eigen::MatrixXd row_cos2;
    Eigen::MatrixXd col_cos2;
    double total_inertia = 0.0;  // over all axes, kept or not
    int n_dims_kept = 0;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::string source;
};

// Eigenvalues this far below lambda_1 (or below the absolute floor) count
// as rank deficiency, not structure.
inline constexpr double k_ca_relative_rank_cutoff = 1e-12;
inline constexpr double k_ca_absolute_rank_cutoff = 1e-24;

inline CAModel fit_ca(const CAInput& input, int n_dims) {
    if (n_dims < 1) throw ArgumentError("fit_ca: requested dimensions must be >= 1");
    const Eigen::MatrixXd& counts = input.counts;
    if (counts.rows() == 0 || counts.cols() == 0) {
        throw PreconditionError("fit_ca: empty table");
    }
    if ((counts.array() < 0).any()) throw PreconditionError("fit_ca: negative count");
    const double n = counts.sum();
    if (!(n > 0)) throw PreconditionError("fit_ca: grand total must be positive");

    auto label = [](const std::vector<std::string>& labels, Eigen::Index i, const char* kind) {
        if (i < static_cast<Eigen::Index>(labels.size())) return labels[static_cast<std::size_t>(i)];
        return std::string(kind) + " " + std::to_string(i);
    };

    Eigen::VectorXd r = counts.rowwise().sum() / n;
    Eigen::VectorXd c = counts.colwise().sum().transpose() / n;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        if (r(i) <= 0) {
            throw PreconditionError("fit_ca: zero-mass row \"" + label(input.row_labels, i, "row") +
                                    "\"");
        }
    }
    for (Eigen::Index j = 0; j < c.size(); ++j) {
        if (c(j) <= 0) {
            throw PreconditionError("fit_ca: zero-mass column \"" +
                                    label(input.col_labels, j, "column") + "\"");
        }
    }

    Eigen::VectorXd r_isqrt = r.array().rsqrt();
    Eigen::VectorXd c_isqrt = c.array().rsqrt();
    Eigen::MatrixXd S = (counts / n - r * c.transpose());
    S = r_isqrt.asDiagonal() * S * c_isqrt.asDiagonal();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    Eigen::MatrixXd U = svd.matrixU();
    Eigen::MatrixXd V = svd.matrixV();

    CAModel model;
    model.row_masses = r;
    model.col_masses = c;
    model.total_inertia = S.squaredNorm();
    model.row_labels = input.row_labels;
    model.col_labels = input.col_labels;
    model.source = input.source;

    const double lambda1 = sigma.size() > 0 ? sigma(0) * sigma(0) : 0.0;
    const double cutoff = std::max(k_ca_relative_rank_cutoff * lambda1, k_ca_absolute_rank_cutoff);
    int rank = 0;
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
        if (sigma(k) * sigma(k) > cutoff) ++rank;
    }
    const int kept = std::min(n_dims, rank);
    model.n_dims_kept = kept;

    const auto n_rows = counts.rows();
    const auto n_cols = counts.cols();
    model.singular_values.resize(kept);
    model.eigenvalues.resize(kept);
    model.row_coords.resize(n_rows, kept);
    model.col_coords.resize(n_cols, kept);
    model.row_contrib.resize(n_rows, kept);
    model.col_contrib.resize(n_cols, kept);
    model.row_cos2.resize(n_rows, kept);
    model.col_cos2.resize(n_cols, kept);

    // Chi-square distances to the centroid, for squared cosines.
    Eigen::VectorXd row_d2 = Eigen::VectorXd::Zero(n_rows);
    Eigen::VectorXd col_d2 = Eigen::VectorXd::Zero(n_cols);
    for (Eigen::Index i = 0; i < n_rows; ++i) {
        for (Eigen::Index j = 0; j < n_cols; ++j) {
            double p = counts(i, j) / n;
            double dr = p / r(i) - c(j);
            row_d2(i) += dr * dr / c(j);
            double dc = p / c(j) - r(i);
            col_d2(j) += dc * dc / r(i);
        }
    }

    for (int k = 0; k < kept; ++k) {
        // Deterministic axis orientation: dominant loading positive.
        Eigen::Index arg_max = 0;
        V.col(k).cwiseAbs().maxCoeff(&arg_max);
        if (V(arg_max, k) < 0) {
            U.col(k) = -U.col(k);
            V.col(k) = -V.col(k);
        }
        const double s = sigma(k);
        const double lambda = s * s;
        model.singular_values(k) = s;
        model.eigenvalues(k) = lambda;
        model.row_coords.col(k) = s * (r_isqrt.array() * U.col(k).array()).matrix();
        model.col_coords.col(k) = s * (c_isqrt.array() * V.col(k).array()).matrix();
        for (Eigen::Index i = 0; i < n_rows; ++i) {
            double f = model.row_coords(i, k);
            model.row_contrib(i, k) = r(i) * f * f / lambda;
            model.row_cos2(i, k) = row_d2(i) > 0 ? f * f / row_d2(i) : 0.0;
        }
        for (Eigen::Index j = 0; j < n_cols; ++j) {
            double g = model.col_coords(j, k);
            model.col_contrib(j, k) = c(j) * g * g / lambda;
            model.col_cos2(j, k) = col_d2(j) > 0 ? g * g / col_d2(j) : 0.0;
        }
    }
    return model;
}

enum class PointKind { Row, Column };  // metadoc = Row, metakey = Column
enum class AxisSign { Positive, Negative };

struct MetaSetMember {
    std::string id;
    double contribution = 0.0;
    double coordinate = 0.0;
};

struct MetaSet {
    int axis = 0;
    AxisSign sign = AxisSign::Positive;
    PointKind kind = PointKind::Row;
    double threshold_multiplier = 0.0;
    double cutoff = 0.0;  // threshold_multiplier / n_items
    std::vector<MetaSetMember> members;  // contribution-descending
};

// Items whose contribution on the axis exceeds multiplier times the average
// contribution (1 / n_items) and whose coordinate carries the requested sign.
inline MetaSet extract_metaset(const CAModel& model, int axis, PointKind kind, AxisSign sign,
                               double multiplier) {
    if (axis < 0 || axis >= model.n_dims_kept) {
        throw ArgumentError("extract_metaset: axis " + std::to_string(axis) +
                            " out of range (kept dimensions: " +
                            std::to_string(model.n_dims_kept) + ")");
    }
    if (!(multiplier > 0)) throw ArgumentError("extract_metaset: multiplier must be > 0");

    const bool rows = (kind == PointKind::Row);
    const Eigen::MatrixXd& contrib = rows ? model.row_contrib : model.col_contrib;
    const Eigen::MatrixXd& coords = rows ? model.row_coords : model.col_coords;
    const auto& labels = rows ? model.row_labels : model.col_labels;
    const auto n_items = static_cast<std::size_t>(contrib.rows());

    MetaSet set;
    set.axis = axis;
    set.sign = sign;
    set.kind = kind;
    set.threshold_multiplier = multiplier;
    set.cutoff = multiplier / static_cast<double>(n_items);
    for (std::size_t i = 0; i < n_items; ++i) {
        double ctr = contrib(static_cast<Eigen::Index>(i), axis);
        double coord = coords(static_cast<Eigen::Index>(i), axis);
        bool sign_ok = (sign == AxisSign::Positive) ? coord > 0 : coord < 0;
        if (ctr > set.cutoff && sign_ok) {
            std::string id = i < labels.size() ? labels[i]
                                               : (rows ? "row " : "column ") + std::to_string(i);
            set.members.push_back({std::move(id), ctr, coord});
        }
    }
    std::sort(set.members.begin(), set.members.end(), [](const MetaSetMember& a, const MetaSetMember& b) {
        if (a.contribution != b.contribution) return a.contribution > b.contribution;
        return a.id < b.id;
    });
    return set;
}

namespace detail {

inline Eigen::MatrixXd project_profiles(const CAModel& model, const Eigen::MatrixXd& profiles,
                                        const Eigen::MatrixXd& opposite_coords) {
    if (profiles.cols() != opposite_coords.rows()) {
        throw ArgumentError("project_supplementary: profile length " +
                            std::to_string(profiles.cols()) + " does not match model size " +
                            std::to_string(opposite_coords.rows()));
    }
    Eigen::MatrixXd coords(profiles.rows(), model.n_dims_kept);
    for (Eigen::Index i = 0; i < profiles.rows(); ++i) {
        double total = profiles.row(i).sum();
        if (!(total > 0)) {
            throw PreconditionError("project_supplementary: zero-sum profile at index " +
                                    std::to_string(i));
        }
        Eigen::RowVectorXd p = profiles.row(i) / total;
        for (int k = 0; k < model.n_dims_kept; ++k) {
            coords(i, k) = p.dot(opposite_coords.col(k)) / model.singular_values(k);
        }
    }
    return coords;
}

}  // namespace detail

// Transition formulas: a supplementary profile is placed from the active
// coordinates of the opposite set without re-fitting the axes. Each row of
// `profiles` is one count vector.
inline Eigen::MatrixXd project_supplementary_rows(const CAModel& model,
                                                  const Eigen::MatrixXd& profiles) {
    return detail::project_profiles(model, profiles, model.col_coords);
}

inline Eigen::MatrixXd project_supplementary_cols(const CAModel& model,
                                                  const Eigen::MatrixXd& profiles) {
    return detail::project_profiles(model, profiles, model.row_coords);
}

}  // namespace lexca
