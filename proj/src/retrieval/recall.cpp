#include "forumqa/retrieval/recall.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "forumqa/error.hpp"

namespace forumqa::retrieval {

std::vector<std::string> top_k_docs(const std::vector<RetrievalResult>& results, std::size_t k) {
    std::vector<std::string> docs;
    for (std::size_t i = 0; i < std::min(k, results.size()); ++i) {
        const auto& id = results[i].chunk.doc_id;
        if (std::find(docs.begin(), docs.end(), id) == docs.end()) docs.push_back(id);
    }
    return docs;
}

double question_recall(const std::vector<std::string>& ranked_docs, const std::set<std::string>& relevant,
                       std::size_t k) {
    if (relevant.empty()) throw ValidationError("recall needs a non-empty relevant set");
    std::set<std::string> hit;
    for (std::size_t i = 0; i < std::min(k, ranked_docs.size()); ++i) {
        if (relevant.contains(ranked_docs[i])) hit.insert(ranked_docs[i]);
    }
    return static_cast<double>(hit.size()) / static_cast<double>(relevant.size());
}

RecallReport recall_at_k(const std::map<std::string, std::vector<RetrievalResult>>& results,
                         const std::map<std::string, std::set<std::string>>& relevant, std::size_t k) {
    if (k == 0) throw ValidationError("recall@k needs k >= 1");
    RecallReport report;
    double total = 0.0;
    for (const auto& [qid, ranked] : results) {
        auto it = relevant.find(qid);
        if (it == relevant.end() || it->second.empty()) {
            report.excluded.push_back(qid);
            report.warnings.push_back("question \"" + qid + "\" has no relevant documents; excluded from recall");
            spdlog::warn("{}", report.warnings.back());
            continue;
        }
        const auto top = top_k_docs(ranked, k);
        const double r = question_recall(top, it->second, top.size());
        report.per_question[qid] = r;
        total += r;
    }
    if (!report.per_question.empty()) report.mean = total / static_cast<double>(report.per_question.size());
    return report;
}

} // namespace forumqa::retrieval
