#include "forumqa/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "forumqa/error.hpp"
#include "forumqa/parallel.hpp"
#include "forumqa/retrieval/recall.hpp"

namespace forumqa::bench {

using nlohmann::json;

double fc_f1(const FunctionSet& predicted, const FunctionSet& truth) {
    if (truth.empty()) throw ValidationError("F1 needs a non-empty label set");
    if (predicted.empty()) return 0.0;
    std::size_t overlap = 0;
    for (auto f : predicted) overlap += truth.contains(f) ? 1 : 0;
    if (overlap == 0) return 0.0;
    const double p = static_cast<double>(overlap) / static_cast<double>(predicted.size());
    const double r = static_cast<double>(overlap) / static_cast<double>(truth.size());
    return 2.0 * p * r / (p + r);
}

double mean(std::span<const double> xs) {
    if (xs.empty()) throw ValidationError("mean of an empty list");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double z_for_confidence(double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0)) throw ValidationError("confidence must be in (0, 1)");
    if (confidence == 0.95) return 1.96;
    // Solve erf(z / √2) = confidence by bisection.
    double lo = 0.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::erf(mid / std::sqrt(2.0)) < confidence ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

LikertSummary likert_aggregate(std::span<const double> scores, double confidence) {
    LikertSummary s;
    s.n = scores.size();
    s.mean = mean(scores);
    if (s.n < 2) {
        s.flagged = true;
        return s;
    }
    double ss = 0.0;
    for (double x : scores) ss += (x - s.mean) * (x - s.mean);
    const double sd = std::sqrt(ss / static_cast<double>(s.n - 1));
    s.ci_halfwidth = z_for_confidence(confidence) * sd / std::sqrt(static_cast<double>(s.n));
    return s;
}

Cell to_cell(const LikertSummary& s) { return {s.mean, s.ci_halfwidth, s.n}; }

// ---------------------------------------------------------------------------
// Tables

void MetricsTable::set(const std::string& model, const std::string& experiment, const std::string& metric,
                       Cell cell) {
    if (std::find(metrics.begin(), metrics.end(), metric) == metrics.end()) metrics.push_back(metric);
    auto it = std::find_if(rows.begin(), rows.end(),
                           [&](const Row& r) { return r.model == model && r.experiment == experiment; });
    if (it == rows.end()) {
        rows.push_back({model, experiment, {}});
        it = std::prev(rows.end());
    }
    it->cells[metric] = cell;
}

const Cell* MetricsTable::find(const std::string& model, const std::string& experiment,
                               const std::string& metric) const {
    for (const auto& r : rows) {
        if (r.model != model || r.experiment != experiment) continue;
        auto it = r.cells.find(metric);
        return it == r.cells.end() ? nullptr : &it->second;
    }
    return nullptr;
}

json to_json(const MetricsTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        json cells = json::object();
        for (const auto& [metric, c] : r.cells) {
            cells[metric] = {{"mean", c.mean},
                             {"ci_halfwidth", c.ci_halfwidth ? json(*c.ci_halfwidth) : json(nullptr)},
                             {"n", c.n}};
        }
        rows.push_back({{"model", r.model}, {"experiment", r.experiment}, {"cells", cells}});
    }
    return {{"title", t.title}, {"metrics", t.metrics}, {"rows", rows}};
}

MetricsTable table_from_json(const json& j) {
    MetricsTable t;
    t.title = j.at("title").get<std::string>();
    t.metrics = j.at("metrics").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
        Row row{r.at("model").get<std::string>(), r.at("experiment").get<std::string>(), {}};
        for (const auto& [metric, c] : r.at("cells").items()) {
            Cell cell{c.at("mean").get<double>(), std::nullopt, c.at("n").get<std::size_t>()};
            if (!c.at("ci_halfwidth").is_null()) cell.ci_halfwidth = c.at("ci_halfwidth").get<double>();
            if (cell.ci_halfwidth && *cell.ci_halfwidth < 0.0) throw ValidationError("negative interval in table");
            row.cells.emplace(metric, cell);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

ReportFormat parse_report_format(std::string_view text) {
    if (text == "json") return ReportFormat::json;
    if (text == "csv") return ReportFormat::csv;
    if (text == "md" || text == "markdown") return ReportFormat::markdown;
    throw ValidationError("unknown report format \"" + std::string(text) + "\"");
}

std::string_view extension(ReportFormat f) {
    switch (f) {
        case ReportFormat::json: return "json";
        case ReportFormat::csv: return "csv";
        case ReportFormat::markdown: return "md";
    }
    return "";
}

std::string format_cell(const Cell& cell) {
    if (!cell.ci_halfwidth) return fmt::format("{:.3f}", cell.mean);
    return fmt::format("{:.3f} ± {:.3f}", cell.mean, *cell.ci_halfwidth);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string render_markdown(const MetricsTable& t) {
    std::string out;
    if (!t.title.empty()) out += "## " + t.title + "\n\n";
    out += "| model | experiment |";
    for (const auto& m : t.metrics) out += " " + m + " |";
    out += "\n|---|---|";
    for (std::size_t i = 0; i < t.metrics.size(); ++i) out += "---|";
    out += "\n";
    for (const auto& r : t.rows) {
        out += "| " + r.model + " | " + r.experiment + " |";
        for (const auto& m : t.metrics) {
            auto it = r.cells.find(m);
            out += " " + (it == r.cells.end() ? std::string("n/a") : format_cell(it->second)) + " |";
        }
        out += "\n";
    }
    out += "\nIntervals are mean ± 1.96·s/√n (normal approximation).\n";
    return out;
}

} // namespace

std::string render(const MetricsTable& table, ReportFormat format) {
    return render(std::vector<MetricsTable>{table}, format);
}

std::string render(const std::vector<MetricsTable>& tables, ReportFormat format) {
    switch (format) {
        case ReportFormat::json: {
            json all = json::array();
            for (const auto& t : tables) all.push_back(to_json(t));
            return json{{"tables", all}}.dump(2) + "\n";
        }
        case ReportFormat::markdown: {
            std::string out;
            for (std::size_t i = 0; i < tables.size(); ++i) {
                if (i > 0) out += "\n";
                out += render_markdown(tables[i]);
            }
            return out;
        }
        case ReportFormat::csv: {
            std::vector<std::string> metrics;
            for (const auto& t : tables) {
                for (const auto& m : t.metrics) {
                    if (std::find(metrics.begin(), metrics.end(), m) == metrics.end()) metrics.push_back(m);
                }
            }
            std::string out = "table,model,experiment";
            for (const auto& m : metrics) out += "," + csv_field(m + "_mean") + "," + csv_field(m + "_ci") + "," + csv_field(m + "_n");
            out += "\n";
            for (const auto& t : tables) {
                for (const auto& r : t.rows) {
                    out += csv_field(t.title) + "," + csv_field(r.model) + "," + csv_field(r.experiment);
                    for (const auto& m : metrics) {
                        auto it = r.cells.find(m);
                        if (it == r.cells.end()) {
                            out += ",,,";
                            continue;
                        }
                        const auto& c = it->second;
                        out += fmt::format(",{},{},{}", c.mean, c.ci_halfwidth ? fmt::format("{}", *c.ci_halfwidth) : "",
                                           c.n);
                    }
                    out += "\n";
                }
            }
            return out;
        }
    }
    throw ValidationError("unknown report format");
}

void write_report(const std::vector<MetricsTable>& tables, ReportFormat format, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write report " + path.string());
    out << render(tables, format);
}

std::vector<MetricsTable> load_report_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open report " + path.string());
    try {
        const auto j = json::parse(in);
        std::vector<MetricsTable> out;
        for (const auto& t : j.at("tables")) out.push_back(table_from_json(t));
        return out;
    } catch (const json::exception& e) {
        throw ValidationError("bad report " + path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Evaluators

Cell aggregate_per_question(const std::map<std::string, std::vector<double>>& scores, CiOver mode) {
    std::vector<double> samples;
    for (const auto& [_, per_seed] : scores) {
        if (per_seed.empty()) continue;
        if (mode == CiOver::questions) {
            samples.push_back(mean(per_seed));
        } else {
            samples.insert(samples.end(), per_seed.begin(), per_seed.end());
        }
    }
    if (samples.empty()) throw ValidationError("no samples to aggregate");
    return to_cell(likert_aggregate(samples));
}

namespace {

void warn(std::vector<std::string>* warnings, std::string message) {
    spdlog::warn("{}", message);
    if (warnings != nullptr) warnings->push_back(std::move(message));
}

std::map<std::string, const GroundTruth*> index_labels(const std::vector<GroundTruth>& labels) {
    std::map<std::string, const GroundTruth*> out;
    for (const auto& l : labels) out.emplace(l.question_id, &l);
    return out;
}

using RowKey = std::pair<std::string, std::string>;

} // namespace

MetricsTable evaluate_fc(const std::vector<PipelineTrace>& traces, const std::vector<GroundTruth>& labels,
                         CiOver mode, std::vector<std::string>* warnings) {
    const auto by_id = index_labels(labels);
    std::map<RowKey, std::map<std::string, std::vector<double>>> scores;
    std::set<std::string> skipped;
    for (const auto& t : traces) {
        auto it = by_id.find(t.question_id);
        if (it == by_id.end() || it->second->functions.empty()) {
            if (skipped.insert(t.question_id).second) {
                warn(warnings, "question \"" + t.question_id + "\" has no function labels; excluded from F1");
            }
            continue;
        }
        scores[{t.fc_model, std::string(to_string(t.kind))}][t.question_id].push_back(
            fc_f1(t.selected_functions, it->second->functions));
    }
    MetricsTable table;
    table.title = "Function-calling F1";
    for (const auto& [key, per_question] : scores) table.set(key.first, key.second, "f1", aggregate_per_question(per_question, mode));
    return table;
}

MetricsTable evaluate_retrieval(const std::vector<RetrievalMethodRun>& methods,
                                const std::vector<StudentQuestion>& questions, const std::vector<GroundTruth>& labels,
                                const std::vector<std::size_t>& ks, int jobs, std::vector<std::string>* warnings) {
    if (ks.empty()) throw ValidationError("evaluate_retrieval needs at least one k");
    const auto max_k = *std::max_element(ks.begin(), ks.end());
    const auto by_id = index_labels(labels);

    std::vector<const StudentQuestion*> usable;
    for (const auto& q : questions) {
        auto it = by_id.find(q.id);
        if (it == by_id.end() || it->second->relevant_docs.empty()) {
            warn(warnings, "question \"" + q.id + "\" has no relevant documents; excluded from recall");
            continue;
        }
        usable.push_back(&q);
    }

    MetricsTable table;
    table.title = "Retrieval recall";
    for (const auto& method : methods) {
        std::vector<std::vector<retrieval::RetrievalResult>> ranked(usable.size());
        parallel_for(usable.size(), jobs, [&](std::size_t i) { ranked[i] = method.retrieve(*usable[i], max_k); });
        for (auto k : ks) {
            std::vector<double> recalls;
            for (std::size_t i = 0; i < usable.size(); ++i) {
                const auto docs = retrieval::top_k_docs(ranked[i], k);
                recalls.push_back(retrieval::question_recall(docs, by_id.at(usable[i]->id)->relevant_docs, docs.size()));
            }
            if (recalls.empty()) continue;
            table.set(method.model, method.method, "recall@" + std::to_string(k), to_cell(likert_aggregate(recalls)));
        }
    }
    return table;
}

ResponseEvaluation evaluate_responses(const std::vector<PipelineTrace>& traces,
                                      const std::vector<StudentQuestion>& questions,
                                      const std::vector<GroundTruth>& labels, const Judge& judge, int jobs,
                                      CiOver mode, std::vector<std::string>* warnings) {
    const auto by_id = index_labels(labels);
    std::map<std::string, const StudentQuestion*> question_by_id;
    for (const auto& q : questions) question_by_id.emplace(q.id, &q);

    std::vector<const PipelineTrace*> usable;
    for (const auto& t : traces) {
        auto label = by_id.find(t.question_id);
        if (!question_by_id.contains(t.question_id) || label == by_id.end() || !label->second->ta_answer) {
            warn(warnings, "trace " + t.question_id + "." + std::string(to_string(t.kind)) + "." +
                               std::to_string(t.seed) + " has no TA answer; not judged");
            continue;
        }
        usable.push_back(&t);
    }

    std::vector<Judgment> judgments(usable.size());
    parallel_for(usable.size(), jobs, [&](std::size_t i) {
        const auto& t = *usable[i];
        judgments[i] = judge.evaluate(question_by_id.at(t.question_id)->text, t.answer,
                                      *by_id.at(t.question_id)->ta_answer);
    });

    ResponseEvaluation out;
    out.table.title = "Response quality (judge: " + judge.options().model + ")";
    std::map<RowKey, std::map<std::string, std::array<std::vector<double>, 3>>> scores;
    for (std::size_t i = 0; i < usable.size(); ++i) {
        const auto& t = *usable[i];
        out.judged.push_back({t.question_id, std::string(to_string(t.kind)), t.answer_model, t.seed, judgments[i]});
        auto& dims = scores[{t.answer_model, std::string(to_string(t.kind))}][t.question_id];
        dims[0].push_back(judgments[i].factuality);
        dims[1].push_back(judgments[i].relevance);
        dims[2].push_back(judgments[i].style);
    }
    static const std::array<std::string, 3> names{"factuality", "relevance", "style"};
    for (const auto& [key, per_question] : scores) {
        for (std::size_t d = 0; d < 3; ++d) {
            std::map<std::string, std::vector<double>> dim;
            for (const auto& [qid, arr] : per_question) dim[qid] = arr[d];
            out.table.set(key.first, key.second, names[d], aggregate_per_question(dim, mode));
        }
    }
    return out;
}

MetricsTable evaluate_judge_alignment(const std::vector<std::pair<std::string, const Judge*>>& judges,
                                      const std::vector<FewShot>& labelled, int jobs,
                                      std::map<std::string, AlignmentReport>* reports) {
    if (labelled.empty()) throw ValidationError("judge alignment needs a labelled set");
    MetricsTable table;
    table.title = "Judge alignment with TA scores";
    std::vector<Judgment> truth;
    for (const auto& item : labelled) truth.push_back(item.scores);
    for (const auto& [model, judge] : judges) {
        std::vector<Judgment> predicted(labelled.size());
        parallel_for(labelled.size(), jobs, [&](std::size_t i) {
            const auto& item = labelled[i];
            predicted[i] = judge->evaluate(item.question, item.llm_answer, item.ta_answer);
        });
        const auto report = align(predicted, truth);
        if (reports != nullptr) (*reports)[model] = report;
        const std::array<std::pair<std::string, const DimensionAlignment*>, 3> dims{
            {{"factuality", &report.factuality}, {"relevance", &report.relevance}, {"style", &report.style}}};
        for (const auto& [name, dim] : dims) {
            table.set(model, "alignment", name + "_em", {dim->exact_match, std::nullopt, report.n});
            table.set(model, "alignment", name + "_mae", {dim->mae, std::nullopt, report.n});
        }
    }
    return table;
}

} // namespace forumqa::bench
