#include <gtest/gtest.h>

#include <sstream>

#include "dsmf/dsmf.hpp"

using namespace dsmf;

namespace {
const char* kTwoInstances = R"(# two experts, two instances
@frame A,B

@instance tile1 truth=A
A	0.6
A|B	0.4

A&B	0.5
A | B	0.5

@instance tile2
B 0.3
A|B 0.7

A 1
)";
}  // namespace

TEST(BbaText, Read) {
  const auto doc = read_bba_text(std::string(kTwoInstances));
  EXPECT_EQ(doc.frame->atoms(), (std::vector<std::string>{"A", "B"}));
  ASSERT_EQ(doc.instances.size(), 2u);
  EXPECT_EQ(doc.instances[0].id, "tile1");
  EXPECT_EQ(doc.instances[0].truth, 0u);
  EXPECT_FALSE(doc.instances[1].truth.has_value());
  ASSERT_EQ(doc.instances[0].sources.size(), 2u);
  EXPECT_DOUBLE_EQ(doc.instances[0].sources[1].mass(parse_element(*doc.frame, "A&B")), 0.5);
  EXPECT_DOUBLE_EQ(doc.instances[1].sources[0].mass(parse_element(*doc.frame, "B")), 0.3);
}

TEST(BbaText, InfersFrameInOrderOfAppearance) {
  const auto doc = read_bba_text(std::string("sand\t0.4\nrock|sand\t0.6\n\nrock\t1\n"), "shafer");
  EXPECT_EQ(doc.frame->atoms(), (std::vector<std::string>{"sand", "rock"}));
  EXPECT_EQ(doc.instances.size(), 1u);
  EXPECT_EQ(doc.instances[0].sources.size(), 2u);
  EXPECT_EQ(doc.instances[0].sources[0].model().kind(), ModelKind::Shafer);
}

TEST(BbaText, RoundTrip) {
  const auto doc = read_bba_text(std::string(kTwoInstances));
  std::ostringstream out;
  write_bba_text(out, doc);
  const auto again = read_bba_text(out.str());
  ASSERT_EQ(again.instances.size(), doc.instances.size());
  for (std::size_t i = 0; i < doc.instances.size(); ++i) {
    EXPECT_EQ(again.instances[i].id, doc.instances[i].id);
    EXPECT_EQ(again.instances[i].truth, doc.instances[i].truth);
    for (std::size_t s = 0; s < doc.instances[i].sources.size(); ++s)
      for (const auto& f : doc.instances[i].sources[s].focal())
        EXPECT_EQ(again.instances[i].sources[s].mass(f.element), f.mass);
  }
}

TEST(BbaText, Errors) {
  EXPECT_THROW(read_bba_text(std::string("")), ParseError);
  EXPECT_THROW(read_bba_text(std::string("A\n")), ParseError);
  EXPECT_THROW(read_bba_text(std::string("A\tx\n")), ParseError);
  EXPECT_THROW(read_bba_text(std::string("@bogus\nA 1\n")), ParseError);
  EXPECT_THROW(read_bba_text(std::string("@frame A,B\nC 1\n")), ParseError);
  EXPECT_THROW(read_bba_text(std::string("A 0.5\nB 0.4\n")), ValidationError);
  EXPECT_THROW(read_bba_text(std::string("A&B 1\n"), "shafer"), ValidationError);
  EXPECT_THROW(read_bba_text(std::string("@instance x color=red\nA 1\n")), ParseError);
  EXPECT_THROW(read_bba_text(std::string("@frame A,B\n@instance x truth=C\nA 1\n")), ParseError);
}

TEST(BbaRecords, RoundTrip) {
  const auto doc = read_bba_text(std::string(kTwoInstances));
  std::istringstream in(bba_document_to_json(doc).dump());
  const auto again = read_bba_records(in);
  ASSERT_EQ(again.instances.size(), 2u);
  EXPECT_EQ(again.instances[0].truth, 0u);
  EXPECT_DOUBLE_EQ(again.instances[0].sources[0].mass(parse_element(*again.frame, "A")), 0.6);
  std::istringstream bad("{\"frame\": [\"A\"]}");
  EXPECT_THROW(read_bba_records(bad), ParseError);
  std::istringstream junk("not json");
  EXPECT_THROW(read_bba_records(junk), ParseError);
}

TEST(AnnotationsCsv, RoundTrip) {
  std::istringstream in(
      "tile,expert,entries\n"
      "t1,e1,rock:0.5:sure;sand:0.5:not_sure\n"
      "t1,e2,rock:1:0.6\n"
      "t2,e1,\n");
  const auto recs = read_annotations_csv(in);
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0].annotation.entries.size(), 2u);
  EXPECT_EQ(std::get<CertaintyLevel>(recs[0].annotation.entries[1].certainty), CertaintyLevel::NotSure);
  EXPECT_DOUBLE_EQ(std::get<double>(recs[1].annotation.entries[0].certainty), 0.6);
  EXPECT_TRUE(recs[2].annotation.entries.empty());
  std::ostringstream out;
  write_annotations_csv(out, recs);
  std::istringstream back(out.str());
  const auto again = read_annotations_csv(back);
  ASSERT_EQ(again.size(), recs.size());
  EXPECT_EQ(again[0].annotation.entries[0].cls, "rock");
  EXPECT_DOUBLE_EQ(again[0].annotation.entries[1].proportion, 0.5);
}

TEST(AnnotationsCsv, Errors) {
  std::istringstream header("tile,expert\n");
  EXPECT_THROW(read_annotations_csv(header), ParseError);
  std::istringstream entry("tile,expert,entries\nt1,e1,rock:0.5\n");
  EXPECT_THROW(read_annotations_csv(entry), ParseError);
  std::istringstream level("tile,expert,entries\nt1,e1,rock:0.5:maybe\n");
  EXPECT_THROW(read_annotations_csv(level), ParseError);
}

TEST(ClassifierCsv, RoundTrip) {
  std::istringstream in(
      "signal,classifier,truth,T1,T2,T3\n"
      "s1,knn,T1,0.7,0.2,0.1\n"
      "s1,mlp,T1,0.5,0.4,0.1\n");
  const auto table = read_classifier_csv(in);
  EXPECT_EQ(table.frame->atoms(), (std::vector<std::string>{"T1", "T2", "T3"}));
  ASSERT_EQ(table.records.size(), 2u);
  EXPECT_EQ(table.records[1].classifier, "mlp");
  EXPECT_EQ(table.records[0].truth, 0u);
  EXPECT_DOUBLE_EQ(table.records[1].scores[1], 0.4);
  std::ostringstream out;
  write_classifier_csv(out, table);
  std::istringstream back(out.str());
  EXPECT_EQ(read_classifier_csv(back).records[1].scores, table.records[1].scores);
  std::istringstream bad("signal,classifier,truth,T1,T2\ns1,knn,T9,0.5,0.5\n");
  EXPECT_THROW(read_classifier_csv(bad), ParseError);
  std::istringstream cols("signal,classifier,truth,T1,T2\ns1,knn,T1,0.5\n");
  EXPECT_THROW(read_classifier_csv(cols), ParseError);
}
