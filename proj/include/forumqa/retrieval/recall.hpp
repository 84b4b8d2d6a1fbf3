#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "forumqa/retrieval/search.hpp"

namespace forumqa::retrieval {

/// Distinct doc ids of the first `k` results, in rank order.
std::vector<std::string> top_k_docs(const std::vector<RetrievalResult>& results, std::size_t k);

/// |relevant ∩ ranked_docs[0:k]| / |relevant|; `ranked_docs` may repeat ids.
double question_recall(const std::vector<std::string>& ranked_docs, const std::set<std::string>& relevant,
                       std::size_t k);

struct RecallReport {
    double mean = 0.0;
    std::map<std::string, double> per_question;
    std::vector<std::string> excluded;
    std::vector<std::string> warnings;
};

/// Mean Recall@k over the questions that have results. Questions without
/// labels, or with empty relevant_docs, are excluded with a warning.
RecallReport recall_at_k(const std::map<std::string, std::vector<RetrievalResult>>& results,
                         const std::map<std::string, std::set<std::string>>& relevant, std::size_t k);

} // namespace forumqa::retrieval
