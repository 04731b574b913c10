#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "itercheck/core/types.hpp"

namespace itercheck::experiments {

// LLM-verdict vs ground truth over verification queries.
struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }
    std::optional<double> accuracy() const;  // (tp+tn)/total
    std::optional<double> fpr() const;       // fp/(fp+tn)
    std::optional<double> fnr() const;       // fn/(fn+tp)
};

// One verification query outcome: (ground truth, verdict under test).
struct VerificationRecord {
    bool ground_truth = false;
    bool verdict = false;
};

ConfusionCounts compute_confusion(const std::vector<VerificationRecord>& records);

// Every LLM-verifier round whose per-round ground truth was backfilled.
ConfusionCounts compute_confusion(const std::vector<Transcript>& transcripts);

// Per-round cumulative accuracy over an instance set. Value at round n
// counts instances whose loop, cut off as if the budget were n, would end
// on a ground-truth-correct answer: the accepted candidate if acceptance
// happened by round n, otherwise the latest candidate at round <= n.
struct IterationCurve {
    std::vector<double> values;  // length = budget
};

IterationCurve compute_iteration_curve(const std::vector<Transcript>& transcripts, int budget);

// Fraction with the "x/y" count annotation, e.g. "87.0% (3567/4100)";
// zero denominators render as "n/a".
std::string format_rate(std::int64_t numerator, std::int64_t denominator);

struct AccuracyRow {
    std::string label;
    std::int64_t correct = 0;
    std::int64_t total = 0;
};

struct ConfusionRow {
    std::string label;
    ConfusionCounts counts;
};

enum class ReportFormat { Csv, Markdown };

// Run provenance printed as a header block (config hash, template id, seed).
struct MetricsReport {
    std::vector<std::pair<std::string, std::string>> provenance;
    std::vector<AccuracyRow> accuracy;
    std::vector<ConfusionRow> confusion;
    std::optional<IterationCurve> curve;
};

MetricsReport report_from_transcripts(const std::vector<Transcript>& transcripts, int budget);

std::string render_report(const MetricsReport& report, ReportFormat format);
void emit_report(const MetricsReport& report, ReportFormat format, const std::string& path);

// Inverse of the CSV rendering (header block, accuracy and confusion rows;
// the curve lives in its own file).
MetricsReport report_from_csv(const std::string& text);

std::string curve_to_csv(const IterationCurve& curve);
IterationCurve curve_from_csv(const std::string& text);

}  // namespace itercheck::experiments
