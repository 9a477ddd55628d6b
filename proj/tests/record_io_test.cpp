// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "lastde/record_io.hpp"
#include "synthetic.hpp"

namespace lastde {
namespace {

namespace fs = std::filesystem;

class RecordIoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lastde_record_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_text(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

  fs::path dir_;
};

const char* kGood =
    R"({"schema_version":1,"id":"a","label":"human","n_tokens":3,"logprob":[-1.5,-0.25,-3],"rank":[2,1,7],"entropy":[1.2,0.4,2.5]})";

std::string with_rank(const std::string& ranks) {
  return R"({"schema_version":1,"id":"bad","label":"machine","n_tokens":4,"logprob":[-1,-1,-1,-1],"rank":)" +
         ranks + R"(,"entropy":[0,0,0,0]})";
}

TEST_F(RecordIoTest, ReadsWellFormedFile) {
  const std::string second =
      R"({"schema_version":1,"id":"b","label":"machine","n_tokens":2,"logprob":[-0.5,-1],"rank":[1,1],"entropy":[0.1,0.2],)"
      R"("topk":{"k":2,"token_ids":[[5,9],[3]],"logprobs":[[-0.4054651081081644,-1.0986122886681098],[0]]},)"
      R"("provenance":{"proxy_model":"gpt-j","source_model":"gpt-2","retained_mass":0.97}})";
  const auto path = write_text("two.jsonl", std::string(kGood) + "\n\n" + second + "\n");
  const auto records = read_records(path);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].id, "a");
  EXPECT_EQ(records[0].label, Label::kHuman);
  EXPECT_EQ(records[0].rank, (std::vector<std::int64_t>{2, 1, 7}));
  EXPECT_FALSE(records[0].topk);
  ASSERT_TRUE(records[1].topk);
  EXPECT_EQ((*records[1].topk)[0].token_ids, (std::vector<std::int64_t>{5, 9}));
  EXPECT_EQ((*records[1].topk)[1].size(), 1);
  EXPECT_EQ(records[1].provenance.source_model_name, "gpt-2");
  EXPECT_EQ(records[1].provenance.retained_mass, 0.97);
}

TEST_F(RecordIoTest, EmptyFileIsEmptyStream) {
  EXPECT_TRUE(read_records(write_text("empty.jsonl", "")).empty());
}

TEST_F(RecordIoTest, RankBelowOneNamesFieldAndIndex) {
  const auto path = write_text("bad.jsonl", std::string(kGood) + "\n" + with_rank("[1,2,3,0]") + "\n");
  try {
    read_records(path);
    FAIL() << "expected RecordError";
  } catch (const RecordError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.field(), "rank");
    EXPECT_EQ(e.index(), 3u);
    EXPECT_NE(std::string(e.what()).find("'rank' index 3"), std::string::npos);
  }
}

struct BadLine {
  std::string text;
  std::string field;
};

TEST_F(RecordIoTest, SchemaViolations) {
  const std::vector<BadLine> cases{
      {"{not json", "<line>"},
      {"[1,2]", "<line>"},
      {R"({"schema_version":2,"id":"a","label":"human","n_tokens":1,"logprob":[-1],"rank":[1],"entropy":[0]})",
       "schema_version"},
      {R"({"schema_version":1,"id":"a","label":"robot","n_tokens":1,"logprob":[-1],"rank":[1],"entropy":[0]})",
       "label"},
      {R"({"schema_version":1,"id":"a","label":"human","n_tokens":2,"logprob":[-1],"rank":[1,1],"entropy":[0,0]})",
       "logprob"},
      {R"({"schema_version":1,"id":"a","label":"human","n_tokens":1,"logprob":[0.5],"rank":[1],"entropy":[0]})",
       "logprob"},
      {R"({"schema_version":1,"id":"a","label":"human","n_tokens":1,"logprob":[-1],"rank":[1.5],"entropy":[0]})",
       "rank"},
      {R"({"schema_version":1,"id":"a","label":"human","n_tokens":1,"logprob":[-1],"rank":[1],"entropy":[-2]})",
       "entropy"},
      {R"({"schema_version":1,"label":"human","n_tokens":1,"logprob":[-1],"rank":[1],"entropy":[0]})", "id"},
      {R"({"schema_version":1,"id":"a","label":"human","n_tokens":1,"logprob":[-1],"rank":[1],"entropy":[0],"topk":{"k":2,"token_ids":[[1,2]],"logprobs":[[-1,-1]]}})",
       "topk"},
      {R"({"schema_version":1,"id":"a","label":"human","n_tokens":1,"logprob":[-1],"rank":[1],"entropy":[0],"topk":{"k":2,"token_ids":[[1,2]],"logprobs":[[-1.0986122886681098,-0.4054651081081644]]}})",
       "topk"},
  };
  for (const auto& c : cases) {
    try {
      parse_record(c.text, 9);
      ADD_FAILURE() << "accepted: " << c.text;
    } catch (const RecordError& e) {
      EXPECT_EQ(e.field(), c.field) << e.what();
      EXPECT_EQ(e.line(), 9u);
      EXPECT_EQ(e.code(), Errc::kFormat);
    }
  }
}

TEST_F(RecordIoTest, ReaderContinuesAfterBadLine) {
  const auto path =
      write_text("mixed.jsonl", with_rank("[0,1,1,1]") + "\n" + std::string(kGood) + "\n");
  RecordReader reader(path);
  EXPECT_THROW(reader.next(), RecordError);
  const auto r = reader.next();
  ASSERT_TRUE(r);
  EXPECT_EQ(r->id, "a");
  EXPECT_EQ(reader.line(), 2u);
  EXPECT_FALSE(reader.next());
}

TEST_F(RecordIoTest, MissingFile) {
  EXPECT_THROW(RecordReader(dir_ / "nope.jsonl"), Error);
}

TEST_F(RecordIoTest, RoundTripPlainAndCompressed) {
  const auto records = synthetic::mixed_corpus(5, 40);
  for (const char* name : {"rt.jsonl", "rt.jsonl.gz"}) {
    const auto path = dir_ / name;
    write_records(path, records);
    const auto back = read_records(path);
    ASSERT_EQ(back.size(), records.size());
    for (std::size_t i = 0; i < records.size(); ++i) EXPECT_TRUE(back[i] == records[i]) << i;
  }
  EXPECT_LT(fs::file_size(dir_ / "rt.jsonl.gz"), fs::file_size(dir_ / "rt.jsonl"));
}

TEST_F(RecordIoTest, FormatIsSingleLine) {
  for (const auto& r : synthetic::mixed_corpus(6, 10)) {
    const auto line = format_record(r);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    EXPECT_TRUE(parse_record(line) == r);
  }
}

}  // namespace
}  // namespace lastde
