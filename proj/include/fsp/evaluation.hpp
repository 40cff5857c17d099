#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fsp/flsc.hpp"
#include "fsp/pipeline.hpp"

namespace fsp {

struct RaterRecord {
    std::string video_id;
    std::string rater_id;
    int score; // 0 unstable, 1 uncertain, 2 stable
};

using RaterTable = std::vector<RaterRecord>;

struct AggregatedScore {
    double mean_score;
    StabilityLabel ternary;
};

/// Mean over raters per video; ternary via the 0.8/1.2 thresholds
/// (boundaries map to Uncertain). Throws DataError on duplicate
/// (video, rater) pairs, scores outside {0,1,2}, or an empty table.
std::map<std::string, AggregatedScore> aggregate_raters(const RaterTable& table);

/// Stable iff score > 1.2; uncertain collapses to unstable. Throws
/// DataError outside [0,2].
BinaryLabel binarize(double score);

/// Confusion counts with Unstable as the positive class. Rates that are
/// 0/0 are reported absent rather than 0.
struct EvaluationReport {
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::size_t n = 0;
    double accuracy = 0.0;
    std::optional<double> fp_rate; // fp / (fp + tn)
    std::optional<double> fn_rate; // fn / (fn + tp)
};

EvaluationReport confusion(const std::map<std::string, BinaryLabel>& predictions,
                           const std::map<std::string, BinaryLabel>& truth);

struct BaselineStats {
    double mean_accuracy;
    double std_accuracy; // sample std; 0 for a single trial
};

/// Accuracy of uniform random stable/unstable guessing, over `trials`
/// seeded trials (per-trial streams derived from (seed, trial)).
BaselineStats random_baseline(const std::map<std::string, BinaryLabel>& truth,
                              std::size_t trials, std::uint64_t seed);

struct MethodComparison {
    struct Row {
        std::string video_id;
        std::string method;
        double prediction_value; // 0..2 scale
    };
    std::vector<Row> long_rows; // includes the "human" truth rows
    std::map<std::string, EvaluationReport> reports;
};

/// Per-method confusion against binarized truth plus the long-form table.
/// Every method must cover exactly the truth's video ids.
MethodComparison compare_methods(
    const std::map<std::string, double>& truth_scores,
    const std::map<std::string, std::map<std::string, double>>& methods);

// CSV interfaces (UTF-8, comma-separated, header row required).
RaterTable read_rater_csv(std::istream& in);
std::map<std::string, double> read_prediction_csv(std::istream& in);
void write_report_csv(const std::map<std::string, EvaluationReport>& reports,
                      std::ostream& out);
void write_comparison_csv(const MethodComparison& comparison, std::ostream& out);

} // namespace fsp
