#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ompadvisor/record.hpp"

namespace ompadvisor {

struct ConfusionCounts {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long tn = 0;
};

// Zero-denominator cases (no predicted positives, no actual positives, or
// P+R = 0) report the value 0 with the matching *_defined flag cleared;
// NaN never appears in a report.
struct Metrics {
    ConfusionCounts confusion;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    bool precision_defined = true;
    bool recall_defined = true;
    bool f1_defined = true;
};

// Throws FormatError when the two lists differ in length.
Metrics compute_metrics(const std::vector<int>& predictions,
                        const std::vector<int>& labels);

// Error rates bucketed by loop line count. `hi < 0` marks the open top
// bucket. The rate denominator is the total number of evaluated instances,
// so the rates sum to 1 - accuracy.
struct LengthBinStat {
    int lo = 0;
    int hi = 0;
    long instances = 0;
    long errors = 0;
    double error_rate = 0.0;
};

std::vector<LengthBinStat> error_by_length(
    const std::vector<int>& predictions, const std::vector<int>& labels,
    const std::vector<int>& line_counts);

struct EvalReport {
    Metrics metrics;
    std::vector<LengthBinStat> by_length;
    long evaluated = 0;
    long unparseable = 0;  // inputs a benchmark run could not process
};

EvalReport evaluate_predictions(const std::vector<int>& predictions,
                                const std::vector<int>& labels,
                                const std::vector<int>& line_counts);

// End-to-end scoring of a labeled record set: the label is the presence of
// a directive on the record, the prediction comes from the supplied model
// callback. `unparseable_count` carries over inputs dropped before records
// existed (from the corpus build report). Throws FormatError when `records`
// is empty.
EvalReport benchmark_run(
    const std::vector<SourceRecord>& records,
    const std::function<int(const SourceRecord&)>& predict,
    long unparseable_count);

// Predictions read from a `record_id,label` CSV, aligned to `record_ids`.
// Ids absent from the file score as negative predictions; a duplicated id
// keeps its last line and emits a warning. A leading literal
// `record_id,label` header row is tolerated. Malformed lines raise
// FormatError naming the line number.
struct ExternalPredictions {
    std::vector<int> predictions;
    std::vector<std::string> warnings;
    long missing = 0;
};

ExternalPredictions import_external_predictions(
    const std::string& path, const std::vector<std::string>& record_ids);

// Human-readable metric + length tables, and the single-line machine record.
std::string render_eval_report(const EvalReport& report,
                               const std::string& title);
std::string eval_report_json_line(const EvalReport& report);

}  // namespace ompadvisor
