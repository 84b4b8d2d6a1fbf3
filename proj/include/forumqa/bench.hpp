#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forumqa/corpus.hpp"
#include "forumqa/judge.hpp"
#include "forumqa/pipelines.hpp"
#include "forumqa/retrieval/search.hpp"

namespace forumqa::bench {

/// F1 of a predicted function set against the labelled one. An empty
/// prediction scores 0. Throws ValidationError when `truth` is empty.
double fc_f1(const FunctionSet& predicted, const FunctionSet& truth);

struct LikertSummary {
    double mean = 0.0;
    /// z · sample sd / √n; absent when n < 2.
    std::optional<double> ci_halfwidth;
    std::size_t n = 0;
    /// Set when the interval is undefined (fewer than two scores).
    bool flagged = false;
};

/// Two-sided normal quantile for a confidence level; 0.95 maps to 1.96.
double z_for_confidence(double confidence);

/// Mean and normal-approximation interval half-width. Throws on empty input.
LikertSummary likert_aggregate(std::span<const double> scores, double confidence = 0.95);

double mean(std::span<const double> xs);

struct Cell {
    double mean = 0.0;
    std::optional<double> ci_halfwidth;
    std::size_t n = 0;

    bool operator==(const Cell&) const = default;
};

Cell to_cell(const LikertSummary& s);

struct Row {
    std::string model;
    std::string experiment;
    std::map<std::string, Cell> cells;

    bool operator==(const Row&) const = default;
};

/// Rows keyed by (model, experiment) with one cell per metric column.
struct MetricsTable {
    std::string title;
    std::vector<std::string> metrics;
    std::vector<Row> rows;

    /// Adds or replaces a cell, creating the row and column on first use.
    void set(const std::string& model, const std::string& experiment, const std::string& metric, Cell cell);
    const Cell* find(const std::string& model, const std::string& experiment, const std::string& metric) const;

    bool operator==(const MetricsTable&) const = default;
};

nlohmann::json to_json(const MetricsTable& t);
MetricsTable table_from_json(const nlohmann::json& j);

enum class ReportFormat { json, csv, markdown };
ReportFormat parse_report_format(std::string_view text);
std::string_view extension(ReportFormat f);

/// "4.648 ± 0.036"; just the mean when there is no interval.
std::string format_cell(const Cell& cell);

std::string render(const MetricsTable& table, ReportFormat format);
std::string render(const std::vector<MetricsTable>& tables, ReportFormat format);
void write_report(const std::vector<MetricsTable>& tables, ReportFormat format, const std::filesystem::path& path);
std::vector<MetricsTable> load_report_json(const std::filesystem::path& path);

/// How the interval of a (model, experiment) cell is formed.
enum class CiOver {
    /// Average each question over its seeds, then one sample per question.
    questions,
    /// Every (question, seed) score is a sample.
    samples,
};

/// Reduces (question id → per-seed scores) to a cell.
Cell aggregate_per_question(const std::map<std::string, std::vector<double>>& scores, CiOver mode);

/// Function-selection F1, one row per (fc_model, pipeline), macro-averaged
/// over questions with seeds averaged first.
MetricsTable evaluate_fc(const std::vector<PipelineTrace>& traces, const std::vector<GroundTruth>& labels,
                         CiOver mode = CiOver::questions, std::vector<std::string>* warnings = nullptr);

/// A retrieval method under evaluation: returns ranked results for a question.
struct RetrievalMethodRun {
    std::string model;
    std::string method;
    std::function<std::vector<retrieval::RetrievalResult>(const StudentQuestion&, std::size_t k)> retrieve;
};

/// Recall@k columns per method; each question is retrieved once at the
/// largest k and the ranking is cut for the smaller ones.
MetricsTable evaluate_retrieval(const std::vector<RetrievalMethodRun>& methods,
                                const std::vector<StudentQuestion>& questions, const std::vector<GroundTruth>& labels,
                                const std::vector<std::size_t>& ks = {1, 3, 5}, int jobs = 1,
                                std::vector<std::string>* warnings = nullptr);

struct ResponseEvaluation {
    MetricsTable table;
    std::vector<JudgedRecord> judged;
};

/// Judges every trace's answer against the TA answer and reports Likert
/// means per (answer_model, pipeline). Traces without a TA answer are skipped.
ResponseEvaluation evaluate_responses(const std::vector<PipelineTrace>& traces, const std::vector<StudentQuestion>& questions,
                                      const std::vector<GroundTruth>& labels, const Judge& judge, int jobs = 1,
                                      CiOver mode = CiOver::questions, std::vector<std::string>* warnings = nullptr);

/// Exact match and MAE per dimension for each judge model on a labelled set
/// of (question, answer, TA answer, TA scores).
MetricsTable evaluate_judge_alignment(const std::vector<std::pair<std::string, const Judge*>>& judges,
                                      const std::vector<FewShot>& labelled, int jobs = 1,
                                      std::map<std::string, AlignmentReport>* reports = nullptr);

} // namespace forumqa::bench
