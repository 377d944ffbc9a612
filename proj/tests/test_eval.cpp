#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "ompadvisor/error.hpp"
#include "ompadvisor/eval.hpp"

using namespace ompadvisor;
namespace fs = std::filesystem;

namespace {

// predictions/labels pair realizing tp=8 fp=2 fn=2 tn=8.
void oracle_vectors(std::vector<int>& preds, std::vector<int>& labels) {
    preds.clear();
    labels.clear();
    for (int i = 0; i < 8; ++i) { preds.push_back(1); labels.push_back(1); }
    for (int i = 0; i < 2; ++i) { preds.push_back(1); labels.push_back(0); }
    for (int i = 0; i < 2; ++i) { preds.push_back(0); labels.push_back(1); }
    for (int i = 0; i < 8; ++i) { preds.push_back(0); labels.push_back(0); }
}

fs::path write_csv(const char* name, const std::string& body) {
    const fs::path p = fs::temp_directory_path() /
                       ("ompadvisor_eval_" + std::to_string(::getpid()) + "_" +
                        name + ".csv");
    std::ofstream(p) << body;
    return p;
}

SourceRecord mini_record(std::string id, bool positive, int lines) {
    SourceRecord r;
    r.id = std::move(id);
    r.code_text = "for (;;) x = 1;";
    r.loop_line_count = lines;
    if (positive) {
        r.pragma_raw = "#pragma omp parallel for";
        DirectiveInfo d;
        d.is_parallel_for = true;
        r.directive = d;
    }
    return r;
}

}  // namespace

TEST_CASE("metrics oracle: balanced 8/2/2/8 confusion") {
    std::vector<int> preds, labels;
    oracle_vectors(preds, labels);
    Metrics m = compute_metrics(preds, labels);
    CHECK(m.confusion.tp == 8);
    CHECK(m.confusion.fp == 2);
    CHECK(m.confusion.fn == 2);
    CHECK(m.confusion.tn == 8);
    CHECK(std::abs(m.precision - 0.8) < 1e-12);
    CHECK(std::abs(m.recall - 0.8) < 1e-12);
    CHECK(std::abs(m.f1 - 0.8) < 1e-12);
    CHECK(std::abs(m.accuracy - 0.8) < 1e-12);
    CHECK(m.precision_defined);
    CHECK(m.recall_defined);
    CHECK(m.f1_defined);
}

TEST_CASE("degenerate confusions return flagged zeros") {
    // No predicted positives: precision undefined.
    Metrics no_pred = compute_metrics({0, 0, 0}, {1, 1, 0});
    CHECK(no_pred.precision == 0.0);
    CHECK(!no_pred.precision_defined);
    CHECK(no_pred.recall == 0.0);
    CHECK(no_pred.recall_defined);
    CHECK(no_pred.f1 == 0.0);
    CHECK(!no_pred.f1_defined);

    // No actual positives: recall undefined.
    Metrics no_actual = compute_metrics({1, 0}, {0, 0});
    CHECK(!no_actual.recall_defined);
    CHECK(no_actual.recall == 0.0);

    // All wrong but both classes present: P and R defined but zero, so F1
    // has a zero denominator.
    Metrics all_wrong = compute_metrics({1, 0}, {0, 1});
    CHECK(all_wrong.precision == 0.0);
    CHECK(all_wrong.precision_defined);
    CHECK(all_wrong.recall == 0.0);
    CHECK(all_wrong.recall_defined);
    CHECK(all_wrong.f1 == 0.0);
    CHECK(!all_wrong.f1_defined);
    CHECK(all_wrong.accuracy == 0.0);
}

TEST_CASE("metrics reject mismatched lengths") {
    CHECK_THROWS_AS(compute_metrics({1, 0}, {1}), FormatError);
}

TEST_CASE("error rates bin by line count against the full denominator") {
    // Lengths: bins 1-10, 11-20, 21-30, 31-40, >40.
    std::vector<int> preds = {1, 0, 1, 0, 1, 0};
    std::vector<int> labels = {1, 1, 1, 1, 0, 0};  // errors at idx 1, 3, 4
    std::vector<int> lines = {5, 8, 15, 33, 41, 100};
    auto bins = error_by_length(preds, labels, lines);
    REQUIRE(bins.size() == 5);
    CHECK(bins[0].lo == 1);
    CHECK(bins[0].hi == 10);
    CHECK(bins[4].hi == -1);

    CHECK(bins[0].instances == 2);
    CHECK(bins[0].errors == 1);  // idx 1 (len 8)
    CHECK(bins[1].instances == 1);
    CHECK(bins[1].errors == 0);
    CHECK(bins[3].instances == 1);
    CHECK(bins[3].errors == 1);  // idx 3 (len 33)
    CHECK(bins[4].instances == 2);
    CHECK(bins[4].errors == 1);  // idx 4 (len 41)

    // Every rate uses the total evaluated count (6) as denominator.
    CHECK(bins[0].error_rate == doctest::Approx(1.0 / 6.0));
    CHECK(bins[3].error_rate == doctest::Approx(1.0 / 6.0));
    CHECK(bins[4].error_rate == doctest::Approx(1.0 / 6.0));

    // Property: bin rates sum to 1 - accuracy.
    Metrics m = compute_metrics(preds, labels);
    double sum = 0.0;
    for (const auto& b : bins) sum += b.error_rate;
    CHECK(sum == doctest::Approx(1.0 - m.accuracy));
}

TEST_CASE("evaluate_predictions bundles metrics and bins") {
    std::vector<int> preds, labels;
    oracle_vectors(preds, labels);
    std::vector<int> lines(preds.size(), 4);
    EvalReport report = evaluate_predictions(preds, labels, lines);
    CHECK(report.evaluated == 20);
    CHECK(report.unparseable == 0);
    CHECK(std::abs(report.metrics.f1 - 0.8) < 1e-12);
    REQUIRE(report.by_length.size() == 5);
    CHECK(report.by_length[0].instances == 20);
}

TEST_CASE("benchmark_run scores records through the callback") {
    std::vector<SourceRecord> records = {
        mini_record("a", true, 3), mini_record("b", false, 3),
        mini_record("c", true, 14), mini_record("d", false, 25)};
    // Predict positive only for record "a" and (wrongly) "d".
    EvalReport report = benchmark_run(
        records,
        [](const SourceRecord& r) {
            return r.id == "a" || r.id == "d" ? 1 : 0;
        },
        2);
    CHECK(report.evaluated == 4);
    CHECK(report.unparseable == 2);
    CHECK(report.metrics.confusion.tp == 1);
    CHECK(report.metrics.confusion.fp == 1);
    CHECK(report.metrics.confusion.fn == 1);
    CHECK(report.metrics.confusion.tn == 1);

    CHECK_THROWS_AS(
        benchmark_run({}, [](const SourceRecord&) { return 0; }, 0),
        FormatError);
}

TEST_CASE("external predictions: missing ids become negatives") {
    const fs::path p = write_csv("missing", "a,1\nb,0\nc,1\n");
    ExternalPredictions ext = import_external_predictions(
        p.string(), {"a", "b", "c", "d", "e"});
    CHECK(ext.predictions == std::vector<int>{1, 0, 1, 0, 0});
    CHECK(ext.missing == 2);
    fs::remove(p);
}

TEST_CASE("external predictions: header row and blank lines are tolerated") {
    const fs::path p =
        write_csv("header", "record_id,label\n\na,1\n\nb,1\n");
    ExternalPredictions ext =
        import_external_predictions(p.string(), {"a", "b"});
    CHECK(ext.predictions == std::vector<int>{1, 1});
    CHECK(ext.missing == 0);
    fs::remove(p);
}

TEST_CASE("external predictions: duplicate keeps the last and warns") {
    const fs::path p = write_csv("dup", "a,1\nb,1\na,0\n");
    ExternalPredictions ext =
        import_external_predictions(p.string(), {"a", "b"});
    CHECK(ext.predictions == std::vector<int>{0, 1});
    REQUIRE(!ext.warnings.empty());
    bool mentions_dup = false;
    for (const auto& w : ext.warnings) {
        if (w.find("a") != std::string::npos) mentions_dup = true;
    }
    CHECK(mentions_dup);
    fs::remove(p);
}

TEST_CASE("external predictions: unknown ids warn but do not fail") {
    const fs::path p = write_csv("unknown", "a,1\nghost,1\n");
    ExternalPredictions ext = import_external_predictions(p.string(), {"a"});
    CHECK(ext.predictions == std::vector<int>{1});
    CHECK(!ext.warnings.empty());
    fs::remove(p);
}

TEST_CASE("external predictions: malformed lines name their line number") {
    const fs::path p = write_csv("bad", "a,1\nb;0\n");
    try {
        import_external_predictions(p.string(), {"a", "b"});
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
    fs::remove(p);

    const fs::path bad_label = write_csv("badlabel", "a,yes\n");
    CHECK_THROWS_AS(
        import_external_predictions(bad_label.string(), {"a"}),
        FormatError);
    fs::remove(bad_label);

    CHECK_THROWS_AS(
        import_external_predictions("/nonexistent/preds.csv", {"a"}),
        FormatError);
}

TEST_CASE("hand-computed metrics after the missing-id fallback") {
    // 10 ids; the file covers 7, missing d/e/f score 0.
    const fs::path p = write_csv(
        "hand", "r0,1\nr1,1\nr2,0\nr3,1\nr4,0\nr5,1\nr6,0\n");
    std::vector<std::string> ids = {"r0", "r1", "r2", "r3", "r4",
                                    "r5", "r6", "r7", "r8", "r9"};
    ExternalPredictions ext = import_external_predictions(p.string(), ids);
    REQUIRE(ext.predictions.size() == 10);
    CHECK(ext.missing == 3);
    // True labels: r0..r4 positive, r5..r9 negative.
    std::vector<int> labels = {1, 1, 1, 1, 1, 0, 0, 0, 0, 0};
    Metrics m = compute_metrics(ext.predictions, labels);
    // preds: 1,1,0,1,0 | 1,0,0,0,0 -> tp=3 fn=2 fp=1 tn=4.
    CHECK(m.confusion.tp == 3);
    CHECK(m.confusion.fn == 2);
    CHECK(m.confusion.fp == 1);
    CHECK(m.confusion.tn == 4);
    CHECK(m.precision == doctest::Approx(0.75));
    CHECK(m.recall == doctest::Approx(0.6));
    CHECK(m.accuracy == doctest::Approx(0.7));
    fs::remove(p);
}

TEST_CASE("report rendering marks undefined metrics") {
    Metrics m = compute_metrics({0, 0}, {1, 0});
    EvalReport report;
    report.metrics = m;
    report.evaluated = 2;
    std::string text = render_eval_report(report, "demo");
    CHECK(text.find("demo") != std::string::npos);
    CHECK(text.find("*") != std::string::npos);

    std::string line = eval_report_json_line(report);
    CHECK(line.find("\"precision_defined\":false") != std::string::npos);
    CHECK(line.find('\n') == std::string::npos);
}

TEST_CASE("json line is stable across calls") {
    std::vector<int> preds, labels;
    oracle_vectors(preds, labels);
    std::vector<int> lines(preds.size(), 12);
    EvalReport report = evaluate_predictions(preds, labels, lines);
    CHECK(eval_report_json_line(report) == eval_report_json_line(report));
}
