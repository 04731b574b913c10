#include "itercheck/experiments/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace itercheck::experiments {

namespace {

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

// True when this round's answer is ground-truth correct: the backfilled
// flag when present, else the sound verdict itself (which is the truth).
bool round_correct(const Round& r) {
    if (r.ground_truth_correct) return *r.ground_truth_correct;
    if (r.verdict && r.verdict->source == VerdictSource::SoundVerifier)
        return r.verdict->accepted;
    return false;
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

}  // namespace

std::optional<double> ConfusionCounts::accuracy() const { return ratio(tp + tn, total()); }
std::optional<double> ConfusionCounts::fpr() const { return ratio(fp, fp + tn); }
std::optional<double> ConfusionCounts::fnr() const { return ratio(fn, fn + tp); }

ConfusionCounts compute_confusion(const std::vector<VerificationRecord>& records) {
    ConfusionCounts c;
    for (const auto& r : records) {
        if (r.ground_truth)
            ++(r.verdict ? c.tp : c.fn);
        else
            ++(r.verdict ? c.fp : c.tn);
    }
    return c;
}

ConfusionCounts compute_confusion(const std::vector<Transcript>& transcripts) {
    std::vector<VerificationRecord> records;
    for (const Transcript& t : transcripts)
        for (const Round& r : t.rounds) {
            if (!r.verdict || r.verdict->source != VerdictSource::LlmVerifier) continue;
            if (!r.ground_truth_correct) continue;
            records.push_back({*r.ground_truth_correct, r.verdict->accepted});
        }
    return compute_confusion(records);
}

IterationCurve compute_iteration_curve(const std::vector<Transcript>& transcripts, int budget) {
    if (budget < 1) throw std::invalid_argument("budget must be >= 1");
    IterationCurve curve;
    curve.values.assign(budget, 0.0);
    if (transcripts.empty()) return curve;
    for (const Transcript& t : transcripts) {
        // Index of the first accepting round, if any.
        int accept_at = 0;
        for (std::size_t i = 0; i < t.rounds.size(); ++i)
            if (t.rounds[i].verdict && t.rounds[i].verdict->accepted) {
                accept_at = static_cast<int>(i) + 1;
                break;
            }
        for (int n = 1; n <= budget; ++n) {
            int cut = std::min<int>(n, static_cast<int>(t.rounds.size()));
            if (cut == 0) continue;
            bool correct = (accept_at != 0 && accept_at <= n)
                               ? round_correct(t.rounds[accept_at - 1])
                               : round_correct(t.rounds[cut - 1]);
            if (correct) curve.values[n - 1] += 1.0;
        }
    }
    for (double& v : curve.values) v /= static_cast<double>(transcripts.size());
    return curve;
}

std::string format_rate(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) return "n/a";
    double pct = 100.0 * static_cast<double>(numerator) / static_cast<double>(denominator);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f%% (%lld/%lld)", pct,
                  static_cast<long long>(numerator), static_cast<long long>(denominator));
    return buf;
}

MetricsReport report_from_transcripts(const std::vector<Transcript>& transcripts, int budget) {
    MetricsReport report;
    std::map<std::string, std::pair<std::int64_t, std::int64_t>> by_strategy;
    std::vector<std::string> order;
    for (const Transcript& t : transcripts) {
        if (!by_strategy.count(t.strategy)) order.push_back(t.strategy);
        auto& [correct, total] = by_strategy[t.strategy];
        ++total;
        if (t.ground_truth_correct) ++correct;
    }
    for (const std::string& label : order) {
        auto [correct, total] = by_strategy[label];
        report.accuracy.push_back({label, correct, total});
    }
    ConfusionCounts counts = compute_confusion(transcripts);
    if (counts.total() > 0) report.confusion.push_back({"llm-verifier", counts});
    if (budget > 0) report.curve = compute_iteration_curve(transcripts, budget);
    return report;
}

namespace {

std::string render_csv(const MetricsReport& report) {
    std::string out;
    for (const auto& [key, value] : report.provenance)
        out += "# " + key + ": " + value + "\n";
    out += "kind,label,correct,total,tp,fp,tn,fn,accuracy,fpr,fnr\n";
    for (const AccuracyRow& row : report.accuracy) {
        out += "accuracy," + row.label + "," + std::to_string(row.correct) + "," +
               std::to_string(row.total) + ",,,,," + format_rate(row.correct, row.total) +
               ",,\n";
    }
    for (const ConfusionRow& row : report.confusion) {
        const ConfusionCounts& c = row.counts;
        out += "confusion," + row.label + ",,," + std::to_string(c.tp) + "," +
               std::to_string(c.fp) + "," + std::to_string(c.tn) + "," + std::to_string(c.fn) +
               "," + format_rate(c.tp + c.tn, c.total()) + "," +
               format_rate(c.fp, c.fp + c.tn) + "," + format_rate(c.fn, c.fn + c.tp) + "\n";
    }
    return out;
}

std::string render_markdown(const MetricsReport& report) {
    std::string out;
    if (!report.provenance.empty()) {
        for (const auto& [key, value] : report.provenance)
            out += "- " + key + ": " + value + "\n";
        out += "\n";
    }
    if (!report.accuracy.empty()) {
        out += "| Strategy | Accuracy |\n|---|---|\n";
        for (const AccuracyRow& row : report.accuracy)
            out += "| " + row.label + " | " + format_rate(row.correct, row.total) + " |\n";
        out += "\n";
    }
    if (!report.confusion.empty()) {
        out += "| Verifier | Accuracy | False Positive Rate | False Negative Rate |\n"
               "|---|---|---|---|\n";
        for (const ConfusionRow& row : report.confusion) {
            const ConfusionCounts& c = row.counts;
            out += "| " + row.label + " | " + format_rate(c.tp + c.tn, c.total()) + " | " +
                   format_rate(c.fp, c.fp + c.tn) + " | " + format_rate(c.fn, c.fn + c.tp) +
                   " |\n";
        }
        out += "\n";
    }
    if (report.curve) {
        out += "| Round | Accuracy |\n|---|---|\n";
        char buf[32];
        for (std::size_t i = 0; i < report.curve->values.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.4f", report.curve->values[i]);
            out += "| " + std::to_string(i + 1) + " | " + buf + " |\n";
        }
    }
    return out;
}

}  // namespace

std::string render_report(const MetricsReport& report, ReportFormat format) {
    return format == ReportFormat::Csv ? render_csv(report) : render_markdown(report);
}

void emit_report(const MetricsReport& report, ReportFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << render_report(report, format);
    if (!out) throw std::runtime_error("write failed: " + path);
}

MetricsReport report_from_csv(const std::string& text) {
    MetricsReport report;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            auto colon = line.find(": ", 2);
            if (colon == std::string::npos)
                throw std::runtime_error("bad provenance line: " + line);
            report.provenance.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
            continue;
        }
        if (line.rfind("kind,", 0) == 0) continue;
        auto cells = split_csv_row(line);
        if (cells.size() < 11) throw std::runtime_error("short csv row: " + line);
        if (cells[0] == "accuracy") {
            report.accuracy.push_back(
                {cells[1], std::stoll(cells[2]), std::stoll(cells[3])});
        } else if (cells[0] == "confusion") {
            ConfusionCounts c;
            c.tp = std::stoll(cells[4]);
            c.fp = std::stoll(cells[5]);
            c.tn = std::stoll(cells[6]);
            c.fn = std::stoll(cells[7]);
            report.confusion.push_back({cells[1], c});
        } else {
            throw std::runtime_error("unknown csv row kind: " + cells[0]);
        }
    }
    return report;
}

std::string curve_to_csv(const IterationCurve& curve) {
    std::string out = "round,value\n";
    char buf[32];
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6f", curve.values[i]);
        out += std::to_string(i + 1) + "," + buf + "\n";
    }
    return out;
}

IterationCurve curve_from_csv(const std::string& text) {
    IterationCurve curve;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "round,value") continue;
        auto cells = split_csv_row(line);
        if (cells.size() != 2) throw std::runtime_error("bad curve row: " + line);
        curve.values.push_back(std::stod(cells[1]));
    }
    return curve;
}

}  // namespace itercheck::experiments
