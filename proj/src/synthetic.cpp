#include <random>

#include "forumqa/corpus.hpp"
#include "forumqa/error.hpp"

namespace forumqa {

namespace {

struct Topic {
    const char* name;
    const char* detail;
    const char* fact;
};

// Topic pool is deliberately smaller than a typical question set so topics
// repeat across documents; only the document/header reference disambiguates.
constexpr Topic kTopics[] = {
    {"gradient descent", "learning rate", "a smaller learning rate makes each update step smaller and slows convergence"},
    {"linear regression", "least squares residuals", "the least squares solution minimizes the sum of squared residuals"},
    {"pandas groupby", "aggregation functions", "groupby splits the dataframe into groups before applying the aggregation"},
    {"sql joins", "inner and left joins", "a left join keeps every row of the left table even without a match"},
    {"bootstrap resampling", "sampling with replacement", "the bootstrap resamples the original sample with replacement"},
    {"hypothesis testing", "p-values", "the p-value is the chance under the null of a statistic at least as extreme"},
    {"principal component analysis", "singular value decomposition", "principal components are the right singular vectors of the centered data"},
    {"regularization", "ridge penalty", "the ridge penalty shrinks coefficients toward zero as lambda grows"},
};
constexpr int kTopicCount = static_cast<int>(std::size(kTopics));

struct Policy {
    const char* title;
    const char* query;
    const char* text;
};

constexpr Policy kPolicies[] = {
    {"Late Policy", "late submission penalty", "Late submissions lose 10 percent per day, up to three days. Each student has five slip days for the semester."},
    {"Office Hours", "office hours schedule", "Office hours run Monday through Thursday from 2 PM to 5 PM in the main lab and online."},
    {"Exam Logistics", "midterm exam room", "The midterm exam is held in the evening; bring a photo ID and one handwritten cheat sheet."},
    {"Grading Breakdown", "grade breakdown", "Homework counts for 30 percent, projects 30 percent, and exams 40 percent of the final grade."},
    {"Extension Requests", "extension request form", "Extension requests go through the course form at least 24 hours before the deadline."},
    {"Regrade Requests", "regrade request window", "Regrade requests open one week after grades are released and close one week later."},
};
constexpr int kPolicyCount = static_cast<int>(std::size(kPolicies));

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    // Modulo mapping keeps output identical across standard libraries.
    int below(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
    bool chance(int percent) { return below(100) < percent; }

private:
    std::mt19937_64 rng_;
};

std::string capitalized(std::string s) {
    if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

struct PlantedBlock {
    std::string doc_id;
    int doc_number = 0;
    int header_number = 0;
    int topic = 0;
};

struct Builder {
    Gen& gen;
    std::vector<Document> docs;
    std::vector<PlantedBlock> assignment_blocks;
    std::vector<PlantedBlock> textbook_blocks;
    std::vector<int> qa_topics;
    std::vector<int> logistics_policies;

    void assignment(int n) {
        Document doc;
        doc.id = "hw" + std::to_string(n);
        doc.kind = SourceKind::assignment;
        doc.title = "Homework " + std::to_string(n);
        doc.metadata["number"] = std::to_string(n);
        doc.metadata["week"] = std::to_string(n);
        const int questions = 2 + gen.below(3);
        std::string body = "Homework " + std::to_string(n) + "\nDue Friday of week " + std::to_string(n) +
                           " at 11:59 PM. Submit your notebook to the autograder.\n\n";
        for (int q = 1; q <= questions; ++q) {
            const int t = gen.below(kTopicCount);
            const auto& topic = kTopics[t];
            body += "Question " + std::to_string(q) + "\n";
            body += "This part practices " + std::string(topic.name) + ". Using the provided data, work through " +
                    topic.detail + " and report what you observe about " + topic.name + ".\n";
            body += "Solution: " + capitalized(topic.fact) + ".\n\n";
            assignment_blocks.push_back({doc.id, n, q, t});
        }
        doc.body = body;
        docs.push_back(std::move(doc));
    }

    void textbook(int n) {
        Document doc;
        doc.id = "ch" + std::to_string(n);
        doc.kind = SourceKind::textbook;
        const int main_topic = gen.below(kTopicCount);
        doc.title = "Chapter " + std::to_string(n) + ": " + capitalized(kTopics[main_topic].name);
        doc.metadata["chapter"] = std::to_string(n);
        const int sections = 2 + gen.below(2);
        std::string body = doc.title + "\nThis chapter of the course notes develops the main ideas with examples.\n\n";
        for (int s = 1; s <= sections; ++s) {
            const int t = s == 1 ? main_topic : gen.below(kTopicCount);
            const auto& topic = kTopics[t];
            body += "Section " + std::to_string(n) + "." + std::to_string(s) + "\n";
            body += "In this section we study " + std::string(topic.detail) + " in the context of " + topic.name +
                    ". The key idea is that " + topic.fact + ".\n\n";
            textbook_blocks.push_back({doc.id, n, s, t});
        }
        doc.body = body;
        docs.push_back(std::move(doc));
    }

    void logistics(int n) {
        const int p = (n - 1) % kPolicyCount;
        Document doc;
        doc.id = "logistics" + std::to_string(n);
        doc.kind = SourceKind::logistics;
        doc.title = kPolicies[p].title;
        doc.body = std::string(kPolicies[p].title) + "\n" + kPolicies[p].text + "\n";
        docs.push_back(std::move(doc));
        logistics_policies.push_back(p);
    }

    void qa(int n) {
        const int t = gen.below(kTopicCount);
        const auto& topic = kTopics[t];
        Document doc;
        doc.id = "qa" + std::to_string(n);
        doc.kind = SourceKind::qa;
        doc.title = "Past question about " + std::string(topic.name);
        doc.qa = QAPair{"Can someone explain " + std::string(topic.detail) + " for " + topic.name + "?",
                        capitalized(topic.fact) + "."};
        doc.body = render_qa_body(*doc.qa);
        docs.push_back(std::move(doc));
        qa_topics.push_back(t);
    }
};

Judgment synthetic_ta_scores(Gen& gen) {
    return Judgment::make(4 + gen.below(2), 4 + gen.below(2), 2 + gen.below(2));
}

} // namespace

SyntheticData gen_synthetic_corpus(const SyntheticSpec& spec, std::uint64_t seed) {
    int total_docs = 0;
    for (const auto& [kind, count] : spec.documents) {
        if (count < 0) throw ValidationError("negative document count for " + std::string(to_string(kind)));
        total_docs += count;
    }
    if (total_docs == 0) throw ValidationError("synthetic spec has zero documents");
    if (spec.questions <= 0) throw ValidationError("synthetic spec has zero questions");

    Gen gen(seed);
    Builder b{gen, {}, {}, {}, {}, {}};
    auto count_of = [&](SourceKind k) {
        auto it = spec.documents.find(k);
        return it == spec.documents.end() ? 0 : it->second;
    };
    for (int i = 1; i <= count_of(SourceKind::qa); ++i) b.qa(i);
    for (int i = 1; i <= count_of(SourceKind::textbook); ++i) b.textbook(i);
    for (int i = 1; i <= count_of(SourceKind::assignment); ++i) b.assignment(i);
    for (int i = 1; i <= count_of(SourceKind::logistics); ++i) b.logistics(i);

    std::vector<SourceKind> kinds;
    for (auto k : kAllSourceKinds) {
        if (count_of(k) > 0) kinds.push_back(k);
    }

    SyntheticData out;
    for (int i = 0; i < spec.questions; ++i) {
        const auto kind = kinds[static_cast<std::size_t>(i) % kinds.size()];
        StudentQuestion q;
        q.id = "q" + std::to_string(i + 1);
        GroundTruth g;
        g.question_id = q.id;
        switch (kind) {
        case SourceKind::assignment: {
            const auto& block = b.assignment_blocks[gen.below(static_cast<int>(b.assignment_blocks.size()))];
            const auto& topic = kTopics[block.topic];
            q.text = "For hw" + std::to_string(block.doc_number) + " q" + std::to_string(block.header_number) +
                     ", I am stuck on the part about " + topic.name + ". How should I think about " +
                     topic.detail + "?";
            q.category = Category::assignment;
            q.week = block.doc_number;
            g.functions = {FunctionName::assignment_retrieval};
            if (gen.chance(30)) g.functions.insert(FunctionName::qa_retrieval);
            g.relevant_docs = {block.doc_id};
            g.ta_answer = "For Homework " + std::to_string(block.doc_number) + " Question " +
                          std::to_string(block.header_number) + ", recall that " + topic.fact + ".";
            break;
        }
        case SourceKind::textbook: {
            const auto& block = b.textbook_blocks[gen.below(static_cast<int>(b.textbook_blocks.size()))];
            const auto& topic = kTopics[block.topic];
            q.text = "In chapter " + std::to_string(block.doc_number) + " section " + std::to_string(block.doc_number) +
                     "." + std::to_string(block.header_number) + ", what does the note mean by " + topic.detail +
                     " for " + topic.name + "?";
            q.category = Category::conceptual;
            g.functions = {FunctionName::textbook_retrieval};
            g.relevant_docs = {block.doc_id};
            g.ta_answer = "Section " + std::to_string(block.doc_number) + "." + std::to_string(block.header_number) +
                          " explains that " + topic.fact + ".";
            break;
        }
        case SourceKind::logistics: {
            const int n = 1 + gen.below(static_cast<int>(b.logistics_policies.size()));
            const auto& policy = kPolicies[b.logistics_policies[n - 1]];
            q.text = "Where can I find the " + std::string(policy.query) + " for this course?";
            q.category = Category::logistics;
            g.functions = {FunctionName::logistics_retrieval};
            g.relevant_docs = {"logistics" + std::to_string(n)};
            g.ta_answer = std::string(policy.text);
            break;
        }
        case SourceKind::qa: {
            const int n = 1 + gen.below(static_cast<int>(b.qa_topics.size()));
            const auto& topic = kTopics[b.qa_topics[n - 1]];
            q.text = "I still do not understand " + std::string(topic.detail) + " in " + topic.name +
                     ". Has this come up before?";
            q.category = Category::conceptual;
            g.functions = {FunctionName::qa_retrieval};
            if (gen.chance(40)) g.functions.insert(FunctionName::textbook_retrieval);
            g.relevant_docs = {"qa" + std::to_string(n)};
            g.ta_answer = capitalized(topic.fact) + ".";
            break;
        }
        }
        g.ta_scores = synthetic_ta_scores(gen);
        out.questions.push_back(std::move(q));
        out.labels.push_back(std::move(g));
    }
    out.corpus = Corpus(std::move(b.docs));
    return out;
}

} // namespace forumqa
