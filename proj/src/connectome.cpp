#include "hemon/connectome.hpp"

#include <algorithm>
#include <cmath>

namespace hemon::connectome {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

TimeSeriesMatrix::TimeSeriesMatrix(Eigen::MatrixXd values, std::vector<std::string> roi_names)
    : values_(std::move(values)), roi_names_(std::move(roi_names)) {
    if (values_.rows() < 3) {
        throw DataError("time series needs at least 3 time points, got " +
                        std::to_string(values_.rows()));
    }
    if (values_.cols() < 1) throw DataError("time series has no ROI columns");
    if (static_cast<int>(roi_names_.size()) != values_.cols()) {
        throw DataError("ROI name count (" + std::to_string(roi_names_.size()) +
                        ") does not match column count (" + std::to_string(values_.cols()) + ")");
    }
    if (!values_.allFinite()) {
        for (int i = 0; i < values_.rows(); ++i) {
            for (int j = 0; j < values_.cols(); ++j) {
                if (!std::isfinite(values_(i, j))) {
                    throw DataError("non-finite value at time " + std::to_string(i) + ", ROI '" +
                                    roi_names_[j] + "'");
                }
            }
        }
    }
}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1) {
        throw DataError("correlation matrix must be square and non-empty");
    }
    for (int i = 0; i < m_.rows(); ++i) {
        if (m_(i, i) != 1.0) {
            throw DataError("correlation diagonal must be exactly 1 (row " + std::to_string(i) +
                            ")");
        }
        for (int j = i + 1; j < m_.cols(); ++j) {
            if (m_(i, j) != m_(j, i)) {
                throw DataError("correlation matrix not symmetric at (" + std::to_string(i) +
                                ", " + std::to_string(j) + ")");
            }
            if (!(std::abs(m_(i, j)) <= 1.0)) {
                throw DataError("correlation out of [-1, 1] at (" + std::to_string(i) + ", " +
                                std::to_string(j) + ")");
            }
        }
    }
}

void EmotionRatings::validate() const {
    if (category_count() < 1) throw DataError("ratings need at least one category");
    if (static_cast<int>(categories.size()) != category_count()) {
        throw DataError("category name count does not match rating columns");
    }
    if (max_rating <= 0.0) throw DataError("max rating must be positive");
    for (int i = 0; i < values.rows(); ++i) {
        for (int j = 0; j < values.cols(); ++j) {
            const double y = values(i, j);
            if (!std::isfinite(y) || y < 0.0 || y > max_rating) {
                throw DataError("rating out of [0, " + std::to_string(max_rating) +
                                "] at stimulus " + std::to_string(i) + ", category '" +
                                categories[j] + "'");
            }
        }
    }
}

const std::vector<std::string>& functional_systems() {
    static const std::vector<std::string> systems = {
        "sensory_somatomotor_hand",
        "sensory_somatomotor_mouth",
        "cingulo_opercular_task_control",
        "auditory",
        "default_mode",
        "memory_retrieval",
        "ventral_attention",
        "visual",
        "fronto_parietal_task_control",
        "salience",
        "subcortical",
        "cerebellar",
        "dorsal_attention",
        "uncertain",
    };
    return systems;
}

RoiAtlas::RoiAtlas(std::vector<RoiInfo> rois) : rois_(std::move(rois)) {
    if (rois_.empty()) throw DataError("atlas has no ROIs");
    std::sort(rois_.begin(), rois_.end(),
              [](const RoiInfo& a, const RoiInfo& b) { return a.id < b.id; });
    const auto& vocab = functional_systems();
    for (int i = 0; i < static_cast<int>(rois_.size()); ++i) {
        if (rois_[i].id != i) {
            throw DataError("atlas ids must be contiguous 0..N-1; expected " + std::to_string(i) +
                            ", got " + std::to_string(rois_[i].id));
        }
        if (std::find(vocab.begin(), vocab.end(), rois_[i].system) == vocab.end()) {
            throw DataError("unknown functional system '" + rois_[i].system + "' for ROI " +
                            std::to_string(rois_[i].id));
        }
    }
}

const RoiInfo& RoiAtlas::roi(int id) const {
    if (id < 0 || id >= roi_count()) {
        throw DataError("ROI id " + std::to_string(id) + " outside atlas of " +
                        std::to_string(roi_count()));
    }
    return rois_[id];
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

CorrelationMatrix pearson_correlation(const TimeSeriesMatrix& ts) {
    const Eigen::MatrixXd& x = ts.values();
    const int n = ts.roi_count();

    Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    Eigen::VectorXd norms(n);
    for (int j = 0; j < n; ++j) {
        norms(j) = centered.col(j).norm();
        if (norms(j) == 0.0) {
            throw DataError("zero variance in ROI '" + ts.roi_names()[j] + "' (column " +
                            std::to_string(j) + "); correlation undefined");
        }
    }

    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double v = centered.col(i).dot(centered.col(j)) / (norms(i) * norms(j));
            v = std::clamp(v, -1.0, 1.0);
            r(i, j) = v;
            r(j, i) = v;
        }
    }
    return CorrelationMatrix(std::move(r));
}

graph::WeightedGraph build_network(const CorrelationMatrix& c) {
    const int n = c.size();
    std::vector<graph::WeightedEdge> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            edges.push_back({i, j, c.at(i, j)});
        }
    }
    return graph::WeightedGraph(n, std::move(edges));
}

double quantile(std::vector<double> sample, double q) {
    if (sample.empty()) throw DataError("quantile of empty sample");
    if (!(q > 0.0 && q < 1.0)) throw DataError("quantile must lie in (0, 1)");
    std::sort(sample.begin(), sample.end());
    const double h = q * static_cast<double>(sample.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sample.size()) return sample.back();
    const double frac = h - static_cast<double>(lo);
    return sample[lo] + frac * (sample[lo + 1] - sample[lo]);
}

TimeSeriesMatrix select_emotion_epochs(const TimeSeriesMatrix& ts, const EmotionRatings& ratings,
                                       int category, double q) {
    ratings.validate();
    if (ratings.stimulus_count() != ts.time_count()) {
        throw DataError("ratings rows (" + std::to_string(ratings.stimulus_count()) +
                        ") must align 1:1 with time points (" + std::to_string(ts.time_count()) +
                        ")");
    }
    if (category < 0 || category >= ratings.category_count()) {
        throw DataError("category index " + std::to_string(category) + " out of range");
    }
    if (!(q > 0.0 && q < 1.0)) throw DataError("quantile must lie in (0, 1)");

    const Eigen::VectorXd col = ratings.values.col(category);
    if (col.maxCoeff() == col.minCoeff()) {
        throw DataError("ratings for category '" + ratings.categories[category] +
                        "' are constant; epoch selection is degenerate");
    }
    std::vector<double> sample(col.data(), col.data() + col.size());
    const double threshold = quantile(std::move(sample), q);

    std::vector<int> keep;
    for (int i = 0; i < ts.time_count(); ++i) {
        if (col(i) >= threshold) keep.push_back(i);
    }
    if (static_cast<int>(keep.size()) < 3) {
        throw DataError("epoch selection for category '" + ratings.categories[category] +
                        "' keeps only " + std::to_string(keep.size()) +
                        " time points (need at least 3)");
    }

    Eigen::MatrixXd out(static_cast<int>(keep.size()), ts.roi_count());
    for (std::size_t r = 0; r < keep.size(); ++r) out.row(static_cast<int>(r)) = ts.values().row(keep[r]);
    return TimeSeriesMatrix(std::move(out), ts.roi_names());
}

CorrelationMatrix group_average(const std::vector<CorrelationMatrix>& cs, bool fisher_z) {
    if (cs.empty()) throw DataError("group average of zero matrices");
    const int n = cs.front().size();
    for (const auto& c : cs) {
        if (c.size() != n) {
            throw DataError("correlation matrix size mismatch in group average: " +
                            std::to_string(c.size()) + " vs " + std::to_string(n));
        }
    }

    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    for (const auto& c : cs) {
        if (fisher_z) {
            // atanh blows up at |r| = 1; nudge inside the open interval.
            acc += c.values().unaryExpr([](double r) {
                return std::atanh(std::clamp(r, -1.0 + 1e-15, 1.0 - 1e-15));
            });
        } else {
            acc += c.values();
        }
    }
    acc /= static_cast<double>(cs.size());
    if (fisher_z) acc = acc.unaryExpr([](double z) { return std::tanh(z); });

    for (int i = 0; i < n; ++i) {
        acc(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            const double v = std::clamp(acc(i, j), -1.0, 1.0);
            acc(i, j) = v;
            acc(j, i) = v;
        }
    }
    return CorrelationMatrix(std::move(acc));
}

}  // namespace hemon::connectome
