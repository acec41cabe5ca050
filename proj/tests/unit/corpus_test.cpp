#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "auctag/corpus.hpp"
#include "auctag/error.hpp"

namespace auctag {
namespace {

std::string line(const std::string& session, int turn, int sentence,
                 const std::string& text, const std::string& label) {
  std::string lab = label.empty() ? "null" : "\"" + label + "\"";
  return "{\"session_id\":\"" + session + "\",\"turn_index\":" + std::to_string(turn) +
         ",\"sentence_index\":" + std::to_string(sentence) +
         ",\"speaker\":\"tutor\",\"text\":\"" + text + "\",\"label\":" + lab + "}\n";
}

Corpus parse(const std::string& text, const LabelSet& labels = default_label_set()) {
  std::istringstream in(text);
  return parse_corpus(in, labels);
}

TEST(LabelSet, RejectsTooFewAndDuplicates) {
  EXPECT_THROW(LabelSet({"FP"}), Error);
  EXPECT_THROW(LabelSet({"FP", "FP"}), Error);
  LabelSet ls({"A", "B", "C"});
  EXPECT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls.index_of("C"), 2);
  EXPECT_THROW(ls.index_of("Z"), Error);
}

TEST(LabelSet, DefaultShipsThirtyOneCodes) {
  const auto ls = default_label_set();
  EXPECT_EQ(ls.size(), 31u);
  EXPECT_EQ(ls.code(0), "FP");
  EXPECT_EQ(default_label_set(8).size(), 8u);
  EXPECT_EQ(default_label_set(40).size(), 40u);
}

TEST(LoadCorpus, CountsSessionsAndSentences) {
  std::string text;
  for (const char* s : {"a", "b"}) {
    for (int i = 0; i < 3; ++i) text += line(s, i, 0, "hello there", "FP");
  }
  const Corpus c = parse(text);
  EXPECT_EQ(c.sentences.size(), 6u);
  EXPECT_EQ(c.sessions.size(), 2u);
}

TEST(LoadCorpus, FiftySessions) {
  std::string text;
  for (int s = 0; s < 50; ++s) text += line("s" + std::to_string(s), 0, 0, "ok", "ACK");
  EXPECT_EQ(parse(text).sessions.size(), 50u);
}

TEST(LoadCorpus, SortsWithinSession) {
  const Corpus c = parse(line("a", 1, 0, "second", "FP") + line("a", 0, 1, "first b", "FP") +
                         line("a", 0, 0, "first a", "FP"));
  ASSERT_EQ(c.sentences.size(), 3u);
  EXPECT_EQ(c.sentences[0].text, "first a");
  EXPECT_EQ(c.sentences[1].text, "first b");
  EXPECT_EQ(c.sentences[2].text, "second");
}

TEST(LoadCorpus, UnknownLabelNamesCodeAndLine) {
  try {
    parse(line("a", 0, 0, "hi", "FP") + line("a", 1, 0, "hi", "ZZZ"));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("ZZZ"), std::string::npos);
    EXPECT_NE(msg.find("line 2"), std::string::npos);
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
  }
}

TEST(LoadCorpus, MalformedLineReportsLineNumber) {
  try {
    parse(line("a", 0, 0, "hi", "FP") + "{not json\n");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
  }
}

TEST(LoadCorpus, RejectsDuplicateKeyEmptyFileAndBlankText) {
  EXPECT_THROW(parse(line("a", 0, 0, "x", "FP") + line("a", 0, 0, "y", "FP")), Error);
  EXPECT_THROW(parse(""), Error);
  EXPECT_THROW(parse("\n  \n"), Error);
  EXPECT_THROW(parse(line("a", 0, 0, "   ", "FP")), Error);
  EXPECT_THROW(parse(R"({"session_id":"a","turn_index":0,"sentence_index":0,"speaker":"bot","text":"x","label":null})"
                     "\n"),
               Error);
  EXPECT_THROW(parse(R"({"session_id":"a","turn_index":-1,"sentence_index":0,"speaker":"tutor","text":"x","label":null})"
                     "\n"),
               Error);
}

TEST(LoadCorpus, UnlabeledSentencesAllowed) {
  const Corpus c = parse(line("a", 0, 0, "x", "") + line("a", 1, 0, "y", "FP"));
  EXPECT_FALSE(c.sentences[0].label.has_value());
  EXPECT_EQ(*c.sentences[1].label, "FP");
}

TEST(LoadCorpus, WriteThenParseIsIdentity) {
  const Corpus c = parse(line("b", 0, 0, "x y", "FP") + line("a", 0, 0, "z", "") +
                         line("b", 1, 2, "w", "NF"));
  std::ostringstream out;
  write_corpus(c, out);
  const Corpus again = parse(out.str());
  EXPECT_EQ(again.sessions, c.sessions);
  EXPECT_EQ(again.sentences, c.sentences);
}

TEST(ContextWindows, ThreeSentenceSession) {
  const Corpus c = parse(line("a", 0, 0, "s1", "FP") + line("a", 1, 0, "s2", "FP") +
                         line("a", 2, 0, "s3", "FP"));
  const auto w = build_context_windows(c, true);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_FALSE(w[0].window.prev1);
  EXPECT_FALSE(w[0].window.prev2);
  EXPECT_EQ(w[1].window.prev1->text, "s1");
  EXPECT_FALSE(w[1].window.prev2);
  EXPECT_EQ(w[2].window.prev1->text, "s2");
  EXPECT_EQ(w[2].window.prev2->text, "s1");
}

TEST(ContextWindows, SingleSentence) {
  const auto w = build_context_windows(parse(line("a", 0, 0, "only", "FP")), true);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_FALSE(w[0].window.prev1);
  EXPECT_FALSE(w[0].window.prev2);
}

TEST(ContextWindows, NeverCrossSessions) {
  const Corpus c = parse(line("a", 0, 0, "a1", "FP") + line("a", 1, 0, "a2", "FP") +
                         line("b", 0, 0, "b1", "FP") + line("b", 1, 0, "b2", "FP"));
  const auto w = build_context_windows(c, true);
  ASSERT_EQ(w.size(), 4u);
  EXPECT_EQ(w[2].window.current.text, "b1");
  EXPECT_FALSE(w[2].window.prev1);
  EXPECT_EQ(w[3].window.prev1->text, "b1");
  EXPECT_FALSE(w[3].window.prev2);
}

TEST(ContextWindows, LabeledOnlyKeepsUnlabeledContext) {
  const Corpus c = parse(line("a", 0, 0, "u", "") + line("a", 1, 0, "l", "NF"));
  const auto labeled = build_context_windows(c, true);
  ASSERT_EQ(labeled.size(), 1u);
  EXPECT_EQ(labeled[0].window.prev1->text, "u");
  EXPECT_EQ(labeled[0].label, 1);
  const auto all = build_context_windows(c, false);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].label, kNoLabel);
}

TEST(ContextWindows, EmptyCorpusGivesNoWindows) {
  Corpus c;
  c.label_set = default_label_set();
  EXPECT_TRUE(build_context_windows(c, false).empty());
}

}  // namespace
}  // namespace auctag
