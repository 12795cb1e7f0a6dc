#include "netoutlier/metrics.hpp"

#include <algorithm>
#include <set>

#include "netoutlier/errors.hpp"

namespace netoutlier {

RocResult roc_auc(const std::map<std::string, double>& scores,
                  const std::map<std::string, int>& labels) {
    if (scores.size() != labels.size())
        throw ValidationError("scores and labels disagree on the sample set");
    std::vector<std::pair<double, int>> pts;  // (score, label)
    int pos = 0, neg = 0;
    for (const auto& [id, lab] : labels) {
        auto it = scores.find(id);
        if (it == scores.end()) throw ValidationError("no score for sample " + id);
        if (lab != 0 && lab != 1) throw ValidationError("label for " + id + " must be 0/1");
        pts.push_back({it->second, lab});
        (lab == 1 ? pos : neg)++;
    }
    if (pos == 0 || neg == 0)
        throw ValidationError("ROC needs both classes, got " + std::to_string(pos) +
                              " positive / " + std::to_string(neg) + " negative");

    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    RocResult out;
    out.curve.push_back({0.0, 0.0});
    int tp = 0, fp = 0;
    size_t i = 0;
    while (i < pts.size()) {
        // advance through one distinct score value so ties move diagonally
        size_t j = i;
        while (j < pts.size() && pts[j].first == pts[i].first) {
            (pts[j].second == 1 ? tp : fp)++;
            ++j;
        }
        out.curve.push_back({static_cast<double>(fp) / neg, static_cast<double>(tp) / pos});
        i = j;
    }
    for (size_t k = 1; k < out.curve.size(); ++k) {
        const auto& [x0, y0] = out.curve[k - 1];
        const auto& [x1, y1] = out.curve[k];
        out.auc += (x1 - x0) * (y0 + y1) / 2.0;
    }
    return out;
}

Recovery subnetwork_recovery(const std::vector<int>& found, const std::vector<int>& truth) {
    if (truth.empty()) throw ValidationError("recovery truth set is empty");
    const std::set<int> fs(found.begin(), found.end());
    const std::set<int> ts(truth.begin(), truth.end());
    int hit = 0;
    for (int v : fs)
        if (ts.count(v)) ++hit;
    Recovery r;
    r.precision = fs.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(fs.size());
    r.recall = static_cast<double>(hit) / static_cast<double>(ts.size());
    r.f1 = (r.precision + r.recall) > 0.0
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    return r;
}

}  // namespace netoutlier
