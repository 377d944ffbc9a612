#include "ompadvisor/eval.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "ompadvisor/error.hpp"

namespace ompadvisor {

namespace {

constexpr std::array<std::pair<int, int>, 5> kLengthBins = {{
    {1, 10},
    {11, 20},
    {21, 30},
    {31, 40},
    {41, -1},
}};

std::size_t bin_index(int line_count) {
    for (std::size_t i = 0; i < kLengthBins.size(); ++i) {
        const auto [lo, hi] = kLengthBins[i];
        if (hi < 0 || line_count <= hi) {
            return i;
        }
    }
    return kLengthBins.size() - 1;
}

std::string format_fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Metrics compute_metrics(const std::vector<int>& predictions,
                        const std::vector<int>& labels) {
    if (predictions.size() != labels.size()) {
        throw FormatError("prediction/label length mismatch: " +
                          std::to_string(predictions.size()) + " vs " +
                          std::to_string(labels.size()));
    }
    Metrics m;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool pred = predictions[i] != 0;
        const bool truth = labels[i] != 0;
        if (pred && truth) ++m.confusion.tp;
        else if (pred && !truth) ++m.confusion.fp;
        else if (!pred && truth) ++m.confusion.fn;
        else ++m.confusion.tn;
    }
    const long total =
        m.confusion.tp + m.confusion.fp + m.confusion.fn + m.confusion.tn;
    const long pred_pos = m.confusion.tp + m.confusion.fp;
    const long actual_pos = m.confusion.tp + m.confusion.fn;

    if (pred_pos > 0) {
        m.precision = static_cast<double>(m.confusion.tp) /
                      static_cast<double>(pred_pos);
    } else {
        m.precision_defined = false;
    }
    if (actual_pos > 0) {
        m.recall = static_cast<double>(m.confusion.tp) /
                   static_cast<double>(actual_pos);
    } else {
        m.recall_defined = false;
    }
    if (m.precision_defined && m.recall_defined &&
        m.precision + m.recall > 0.0) {
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    } else {
        m.f1_defined = false;
    }
    m.accuracy = total > 0
                     ? static_cast<double>(m.confusion.tp + m.confusion.tn) /
                           static_cast<double>(total)
                     : 0.0;
    return m;
}

std::vector<LengthBinStat> error_by_length(
    const std::vector<int>& predictions, const std::vector<int>& labels,
    const std::vector<int>& line_counts) {
    if (predictions.size() != labels.size() ||
        predictions.size() != line_counts.size()) {
        throw FormatError("error_by_length inputs must be aligned");
    }
    std::vector<LengthBinStat> bins(kLengthBins.size());
    for (std::size_t i = 0; i < kLengthBins.size(); ++i) {
        bins[i].lo = kLengthBins[i].first;
        bins[i].hi = kLengthBins[i].second;
    }
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        LengthBinStat& bin = bins[bin_index(line_counts[i])];
        ++bin.instances;
        if ((predictions[i] != 0) != (labels[i] != 0)) {
            ++bin.errors;
        }
    }
    const auto total = static_cast<double>(predictions.size());
    if (total > 0) {
        for (LengthBinStat& bin : bins) {
            bin.error_rate = static_cast<double>(bin.errors) / total;
        }
    }
    return bins;
}

EvalReport evaluate_predictions(const std::vector<int>& predictions,
                                const std::vector<int>& labels,
                                const std::vector<int>& line_counts) {
    EvalReport report;
    report.metrics = compute_metrics(predictions, labels);
    report.by_length = error_by_length(predictions, labels, line_counts);
    report.evaluated = static_cast<long>(predictions.size());
    return report;
}

EvalReport benchmark_run(
    const std::vector<SourceRecord>& records,
    const std::function<int(const SourceRecord&)>& predict,
    long unparseable_count) {
    if (records.empty()) {
        throw FormatError("benchmark contains no records");
    }
    std::vector<int> predictions, labels, lines;
    predictions.reserve(records.size());
    labels.reserve(records.size());
    lines.reserve(records.size());
    for (const SourceRecord& record : records) {
        predictions.push_back(predict(record));
        labels.push_back(record.has_directive() ? 1 : 0);
        lines.push_back(record.loop_line_count);
    }
    EvalReport report = evaluate_predictions(predictions, labels, lines);
    report.unparseable = unparseable_count;
    return report;
}

ExternalPredictions import_external_predictions(
    const std::string& path, const std::vector<std::string>& record_ids) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open predictions file: " + path);
    }
    std::map<std::string, int> by_id;
    std::map<std::string, int> seen_line;
    ExternalPredictions out;

    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (line_no == 1 && stripped == "record_id,label") continue;
        const std::size_t comma = stripped.find(',');
        if (comma == std::string::npos) {
            throw FormatError("malformed prediction line " +
                              std::to_string(line_no) + ": missing comma");
        }
        const std::string id = trim(stripped.substr(0, comma));
        const std::string label_text = trim(stripped.substr(comma + 1));
        if (id.empty() || (label_text != "0" && label_text != "1")) {
            throw FormatError("malformed prediction line " +
                              std::to_string(line_no) +
                              ": expected record_id,0|1");
        }
        const int label = label_text == "1" ? 1 : 0;
        if (by_id.count(id)) {
            out.warnings.push_back(
                "duplicate prediction for id " + id + " at line " +
                std::to_string(line_no) + "; keeping the last occurrence");
        }
        by_id[id] = label;
        seen_line[id] = 1;
    }

    out.predictions.reserve(record_ids.size());
    for (const std::string& id : record_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) {
            out.predictions.push_back(0);
            ++out.missing;
        } else {
            out.predictions.push_back(it->second);
            seen_line[id] = 2;
        }
    }
    for (const auto& [id, state] : seen_line) {
        if (state == 1) {
            out.warnings.push_back("prediction for unknown record id " + id +
                                   " ignored");
        }
    }
    return out;
}

std::string render_eval_report(const EvalReport& report,
                               const std::string& title) {
    const Metrics& m = report.metrics;
    std::ostringstream out;
    out << title << "\n";
    out << "  instances: " << report.evaluated;
    if (report.unparseable > 0) {
        out << "  (plus " << report.unparseable << " unparseable, excluded)";
    }
    out << "\n";
    out << "  confusion: tp=" << m.confusion.tp << " fp=" << m.confusion.fp
        << " fn=" << m.confusion.fn << " tn=" << m.confusion.tn << "\n";
    auto cell = [](double v, bool defined) {
        return defined ? format_fixed(v, 3) : std::string("0.000*");
    };
    out << "  precision=" << cell(m.precision, m.precision_defined)
        << " recall=" << cell(m.recall, m.recall_defined)
        << " f1=" << cell(m.f1, m.f1_defined)
        << " accuracy=" << format_fixed(m.accuracy, 3) << "\n";
    if (!m.precision_defined || !m.recall_defined || !m.f1_defined) {
        out << "  (* undefined: zero denominator)\n";
    }
    out << "  error rate by loop length (lines):\n";
    for (const LengthBinStat& bin : report.by_length) {
        out << "    ";
        if (bin.hi < 0) {
            out << ">" << (bin.lo - 1);
        } else {
            out << bin.lo << "-" << bin.hi;
        }
        out << ": " << bin.errors << "/" << report.evaluated << " ("
            << format_fixed(100.0 * bin.error_rate, 1) << "%)\n";
    }
    return out.str();
}

std::string eval_report_json_line(const EvalReport& report) {
    nlohmann::json j;
    const Metrics& m = report.metrics;
    j["evaluated"] = report.evaluated;
    j["unparseable"] = report.unparseable;
    j["confusion"] = {{"tp", m.confusion.tp},
                      {"fp", m.confusion.fp},
                      {"fn", m.confusion.fn},
                      {"tn", m.confusion.tn}};
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    j["accuracy"] = m.accuracy;
    j["precision_defined"] = m.precision_defined;
    j["recall_defined"] = m.recall_defined;
    j["f1_defined"] = m.f1_defined;
    nlohmann::json bins = nlohmann::json::array();
    for (const LengthBinStat& bin : report.by_length) {
        bins.push_back({{"lo", bin.lo},
                        {"hi", bin.hi},
                        {"instances", bin.instances},
                        {"errors", bin.errors},
                        {"error_rate", bin.error_rate}});
    }
    j["error_by_length"] = bins;
    return j.dump();
}

}  // namespace ompadvisor
