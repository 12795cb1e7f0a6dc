#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace netoutlier {

struct RocResult {
    std::vector<std::pair<double, double>> curve;  // (fpr, tpr), (0,0) .. (1,1)
    double auc = 0.0;
};

// Threshold sweep over the distinct score values in descending order; the
// trapezoid area over that curve equals the Mann-Whitney rank statistic with
// ties counted half, so tied scores cannot reorder the result. Throws unless
// both classes are present and every label has a score.
RocResult roc_auc(const std::map<std::string, double>& scores,
                  const std::map<std::string, int>& labels);

struct Recovery {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Set overlap between a reported node set and the planted one. Empty found
// scores 0; truth must be nonempty.
Recovery subnetwork_recovery(const std::vector<int>& found, const std::vector<int>& truth);

}  // namespace netoutlier
