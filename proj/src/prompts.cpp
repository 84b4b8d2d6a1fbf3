#include "forumqa/prompts.hpp"

namespace forumqa::prompts {

// Trailing spaces on lines 1-3 are part of the original prompt.
const std::string_view kTeachingAssistant =
    "You will simulate the role of a teaching assistant for an undergraduate data science course, "
    "answering student questions on a course discussion forum.\n"
    "1. Your responses should be clear, helpful, and maintain a positive tone. \n"
    "2. Aim for conciseness and clarity. \n"
    "3. Use the excerpts from any solutions, course notes, and historical question-answer pairs provided "
    "to you as your primary source of information. \n"
    "4. If the question is difficult to answer based on the provided context, reply, 'Sorry, I do not know. "
    "Please wait for a staff member's response.";

const std::string_view kJudgeRubric =
    "You are an expert at grading responses to student questions. You are given:\n"
    "- a student question\n"
    "- an LLM-written answer\n"
    "- a TA-written ground-truth answer.\n"
    "Assign a score from 1 to 5 for factuality and relevance:\n"
    "1. Factuality: Evaluates the correctness of the information provided in the LLM-written response.\n"
    "2. Relevance:  Evaluates the degree to which the LLM-written response is pertinent or related to the "
    "given student question and course.\n"
    "And assign a score from 1 to 3 for style:\n"
    "1. Style: Evaluates the degree to which the coherence, length, and the use of solutions, hints, and "
    "examples in the LLM-written response are appropriate for the given student question.\n"
    "Please refer to the Ground Truth answer as the gold standard for all of the metrics.\n"
    "Respond ONLY in dictionary format like this:\n"
    "{\"factuality\": <1-5>, \"relevance\": <1-5>, \"style\": <1-3>}\n"
    "Do NOT use the tag \"json\" in the response, or any backticks.\n"
    "You are a kind grader. If you are ever deciding between 2 scores, choose the higher one.";

const std::string_view kJudgeFeedbackAddendum =
    "\nThis answer has not been posted yet, so no TA answer exists. Also include a \"feedback\" key whose "
    "value is one or two sentences telling the writer how to improve the answer:\n"
    "{\"factuality\": <1-5>, \"relevance\": <1-5>, \"style\": <1-3>, \"feedback\": \"<text>\"}";

const std::string_view kJudgeReask =
    "Your previous reply could not be parsed. Respond ONLY with the dictionary, no other text.";

const std::string_view kSummarize =
    "Summarize the following course material in at most 120 words. Keep every question number, "
    "section number and title exactly as written, then state what each part covers.";

const std::string_view kDetectHeaders =
    "List every question or section header in the document below, in order of appearance. Copy each "
    "header exactly as it appears in the text and omit everything else. Respond with a JSON array of "
    "strings.";

const std::string_view kTableOfContents =
    "Below is a table of contents for course material. Select the entries most likely to contain the "
    "answer to the student question. Respond with a JSON array of entry ids, best first.";

const std::string_view kRelevance =
    "You decide whether course material helps answer a student question. Reply with a single word: "
    "Yes or No.";

const std::string_view kSelectFunctions =
    "Decide which retrieval functions are needed to answer the student question below. Respond with a "
    "comma-separated list of function names and nothing else.";

} // namespace forumqa::prompts
