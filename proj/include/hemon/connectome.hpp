#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "hemon/error.hpp"
#include "hemon/graph.hpp"

namespace hemon::connectome {

// ROI time series: rows are time points (TRs), columns are ROIs. Entries
// must be finite and at least 3 rows are required so correlations have
// variance to work with.
class TimeSeriesMatrix {
public:
    TimeSeriesMatrix(Eigen::MatrixXd values, std::vector<std::string> roi_names);

    int time_count() const { return static_cast<int>(values_.rows()); }
    int roi_count() const { return static_cast<int>(values_.cols()); }
    const Eigen::MatrixXd& values() const { return values_; }
    const std::vector<std::string>& roi_names() const { return roi_names_; }

private:
    Eigen::MatrixXd values_;
    std::vector<std::string> roi_names_;
};

// Symmetric correlation matrix: unit diagonal, entries in [-1, 1].
class CorrelationMatrix {
public:
    explicit CorrelationMatrix(Eigen::MatrixXd m);

    int size() const { return static_cast<int>(m_.rows()); }
    double at(int i, int j) const { return m_(i, j); }
    const Eigen::MatrixXd& values() const { return m_; }

private:
    Eigen::MatrixXd m_;
};

// Per-stimulus emotion ratings: rows are stimuli (aligned 1:1 with time
// points in the naturalistic setting), columns are emotion categories,
// values in [0, max_rating].
struct EmotionRatings {
    Eigen::MatrixXd values;
    std::vector<std::string> categories;
    double max_rating = 100.0;

    int stimulus_count() const { return static_cast<int>(values.rows()); }
    int category_count() const { return static_cast<int>(values.cols()); }

    void validate() const;
};

// Fixed vocabulary of functional systems (13 named systems plus
// "uncertain").
const std::vector<std::string>& functional_systems();

struct RoiInfo {
    int id = 0;
    std::string name;
    std::string system;
    std::array<double, 3> xyz{0.0, 0.0, 0.0};
};

// ROI metadata with contiguous ids 0..N-1 and system labels drawn from the
// functional_systems() vocabulary.
class RoiAtlas {
public:
    explicit RoiAtlas(std::vector<RoiInfo> rois);

    int roi_count() const { return static_cast<int>(rois_.size()); }
    const RoiInfo& roi(int id) const;
    const std::vector<RoiInfo>& rois() const { return rois_; }

private:
    std::vector<RoiInfo> rois_;
};

// Pearson correlation over time for every column pair. Throws if any column
// has zero variance, naming the ROI.
CorrelationMatrix pearson_correlation(const TimeSeriesMatrix& ts);

// Dense functional-connectivity graph: one edge per unordered ROI pair with
// the correlation as its weight, copied bit-exactly.
graph::WeightedGraph build_network(const CorrelationMatrix& c);

// Keeps the rows whose rating for `category` is at least the given quantile
// of that category's ratings (linear-interpolation quantile), preserving row
// order. Throws if the rating column is constant or fewer than 3 rows
// survive.
TimeSeriesMatrix select_emotion_epochs(const TimeSeriesMatrix& ts, const EmotionRatings& ratings,
                                       int category, double quantile);

// Element-wise mean of correlation matrices with the diagonal re-pinned to
// 1. With fisher_z, averaging happens in atanh space.
CorrelationMatrix group_average(const std::vector<CorrelationMatrix>& cs, bool fisher_z = false);

// Linear-interpolation quantile of a sample (q in (0, 1)).
double quantile(std::vector<double> sample, double q);

}  // namespace hemon::connectome
