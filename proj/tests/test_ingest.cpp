#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "ned/ingest.hpp"
#include "ned/time.hpp"

using namespace ned;
using test_helpers::TempDir;
using test_helpers::kDayMs;
using test_helpers::write_file;

TEST_CASE("iso 8601 timestamps parse to epoch milliseconds") {
  CHECK(parse_iso8601_ms("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_iso8601_ms("1970-01-02") == kDayMs);
  CHECK(parse_iso8601_ms("1970-01-01T00:00:00.250Z") == 250);
  CHECK(parse_iso8601_ms("1970-01-01 01:00:00") == 3'600'000);
  CHECK(parse_iso8601_ms("1970-01-01T01:00:00+01:00") == 0);
  CHECK(parse_iso8601_ms("1970-01-01T00:00-0230") == 9'000'000);
  CHECK(parse_iso8601_ms("2021-03-01T09:00:00Z") ==
        18'687LL * kDayMs + 9 * 3'600'000);
  CHECK_FALSE(parse_iso8601_ms("not a date"));
  CHECK_FALSE(parse_iso8601_ms("2021-13-01"));
  CHECK_FALSE(parse_iso8601_ms("2021-02-30"));
}

TEST_CASE("timestamp formatting round-trips") {
  for (std::int64_t ms : {0LL, 123LL, 86'400'000LL, 1'614'589'200'000LL}) {
    CHECK(parse_iso8601_ms(format_iso8601_ms(ms)) == ms);
  }
}

TEST_CASE("durations accept unit suffixes") {
  CHECK(parse_duration_ms("250ms") == 250);
  CHECK(parse_duration_ms("90s") == 90'000);
  CHECK(parse_duration_ms("1m") == 60'000);
  CHECK(parse_duration_ms("2h") == 7'200'000);
  CHECK(parse_duration_ms("1d") == kDayMs);
  CHECK(parse_duration_ms("500") == 500);
  CHECK_FALSE(parse_duration_ms("1w"));
  CHECK_FALSE(parse_duration_ms(""));
}

TEST_CASE("jsonl corpus parses valid records in timestamp order") {
  TempDir dir;
  std::string lines =
      R"({"id": "b", "timestamp": 2000, "text": "second doc"})" "\n"
      R"({"id": "a", "timestamp": "1970-01-01T00:00:01Z", "text": "first doc"})" "\n"
      R"({"id": "c", "timestamp": 3000, "text": "third doc", "source_kind": "tweet"})" "\n";
  write_file(dir.file("corpus.jsonl"), lines);
  Corpus corpus =
      parse_corpus(dir.file("corpus.jsonl").string(), CorpusFormat::json_lines);
  REQUIRE(corpus.documents.size() == 3);
  CHECK(corpus.skipped == 0);
  CHECK(corpus.documents[0].id == "a");
  CHECK(corpus.documents[1].id == "b");
  CHECK(corpus.documents[2].id == "c");
  CHECK(corpus.documents[0].source_kind == SourceKind::article);
  CHECK(corpus.documents[2].source_kind == SourceKind::tweet);
}

TEST_CASE("malformed records are skipped and counted") {
  TempDir dir;
  std::string lines =
      R"({"id": "a", "timestamp": 1, "text": "fine"})" "\n"
      R"({"id": "b", "timestamp": 2})" "\n"
      "this is not json\n"
      R"({"id": "c", "timestamp": "bogus", "text": "bad clock"})" "\n"
      R"({"id": "d", "timestamp": 4, "text": "also fine"})" "\n";
  write_file(dir.file("corpus.jsonl"), lines);
  Corpus corpus =
      parse_corpus(dir.file("corpus.jsonl").string(), CorpusFormat::json_lines);
  CHECK(corpus.documents.size() == 2);
  CHECK(corpus.skipped == 3);
}

TEST_CASE("corpus error cases") {
  TempDir dir;
  CHECK_THROWS_MATCHES(
      parse_corpus(dir.file("absent.jsonl").string(),
                   CorpusFormat::json_lines),
      Error, Catch::Matchers::MessageMatches(
                 Catch::Matchers::StartsWith("FileUnreadable")));

  write_file(dir.file("empty.jsonl"), "\n\n");
  CHECK_THROWS_MATCHES(
      parse_corpus(dir.file("empty.jsonl").string(), CorpusFormat::json_lines),
      Error, Catch::Matchers::MessageMatches(
                 Catch::Matchers::StartsWith("NoValidRecords")));

  write_file(dir.file("dup.jsonl"),
             R"({"id": "a", "timestamp": 1, "text": "one"})" "\n"
             R"({"id": "a", "timestamp": 2, "text": "two"})" "\n");
  CHECK_THROWS_MATCHES(
      parse_corpus(dir.file("dup.jsonl").string(), CorpusFormat::json_lines),
      Error, Catch::Matchers::MessageMatches(
                 Catch::Matchers::StartsWith("DuplicateId")));
}

TEST_CASE("equal timestamps keep file order") {
  TempDir dir;
  std::string lines;
  for (int i = 0; i < 8; ++i) {
    lines += R"({"id": "doc)" + std::to_string(i) +
             R"(", "timestamp": 500, "text": "same instant"})" "\n";
  }
  write_file(dir.file("corpus.jsonl"), lines);
  Corpus corpus =
      parse_corpus(dir.file("corpus.jsonl").string(), CorpusFormat::json_lines);
  REQUIRE(corpus.documents.size() == 8);
  for (int i = 0; i < 8; ++i) {
    CHECK(corpus.documents[i].id == "doc" + std::to_string(i));
  }
}

TEST_CASE("csv corpus handles quoting and embedded structure") {
  TempDir dir;
  std::string csv =
      "id,timestamp,text,source_kind,entities\n"
      "a,1000,\"Hello, quoted \"\"world\"\"\",article,\n"
      "b,2000,\"line\nbreak\",tweet,\n"
      "c,3000,Entity doc,article,\"[{\"\"surface\"\": \"\"Acme\"\", "
      "\"\"kind\"\": \"\"ORG\"\", \"\"start\"\": 0, \"\"end\"\": 6}]\"\n";
  write_file(dir.file("corpus.csv"), csv);
  Corpus corpus =
      parse_corpus(dir.file("corpus.csv").string(), CorpusFormat::csv);
  REQUIRE(corpus.documents.size() == 3);
  CHECK(corpus.documents[0].text == "Hello, quoted \"world\"");
  CHECK(corpus.documents[1].text == "line break");
  CHECK(corpus.documents[1].source_kind == SourceKind::tweet);
  REQUIRE(corpus.documents[2].pre_annotations.has_value());
  REQUIRE(corpus.documents[2].pre_annotations->size() == 1);
  CHECK(corpus.documents[2].pre_annotations->front().surface == "Acme");
}

TEST_CASE("document text is whitespace-normalized with spans remapped") {
  TempDir dir;
  nlohmann::ordered_json rec;
  rec["id"] = "a";
  rec["timestamp"] = 1;
  rec["text"] = "  Acme   Corp \t announced\n  earnings  ";
  rec["entities"] = nlohmann::json::array(
      {{{"surface", "Acme   Corp"}, {"kind", "ORG"}, {"start", 2}, {"end", 13}}});
  write_file(dir.file("corpus.jsonl"), rec.dump() + "\n");
  Corpus corpus =
      parse_corpus(dir.file("corpus.jsonl").string(), CorpusFormat::json_lines);
  REQUIRE(corpus.documents.size() == 1);
  const Document& doc = corpus.documents[0];
  CHECK(doc.text == "Acme Corp announced earnings");
  REQUIRE(doc.pre_annotations.has_value());
  const EntityMention& m = doc.pre_annotations->front();
  CHECK(doc.text.substr(m.start, m.end - m.start) == "Acme Corp");
}

TEST_CASE("discretize produces a gapless block sequence") {
  std::vector<Document> docs;
  docs.push_back({"a", 0, "day zero", SourceKind::article, {}});
  docs.push_back({"b", 2 * kDayMs + 5, "day two", SourceKind::article, {}});
  auto blocks = discretize(std::move(docs), kDayMs, 0);
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[0].documents.size() == 1);
  CHECK(blocks[1].documents.empty());
  CHECK(blocks[2].documents.size() == 1);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    CHECK(blocks[i].index == i);
    CHECK(blocks[i].start_ms == static_cast<std::int64_t>(i) * kDayMs);
    CHECK(blocks[i].duration_ms == kDayMs);
  }
}

TEST_CASE("discretize partitions the documents") {
  auto rng = test_helpers::make_rng(411);
  std::uniform_int_distribution<std::int64_t> ts(0, 9 * kDayMs);
  std::vector<Document> docs;
  for (int i = 0; i < 60; ++i) {
    docs.push_back({"d" + std::to_string(i), ts(rng), "text",
                    SourceKind::article, {}});
  }
  std::sort(docs.begin(), docs.end(),
            [](const Document& a, const Document& b) {
              return a.timestamp_ms < b.timestamp_ms;
            });
  std::multiset<std::string> before;
  for (const Document& d : docs) before.insert(d.id);
  auto blocks = discretize(std::move(docs), kDayMs, 0);
  std::multiset<std::string> after;
  for (const TimeBlock& b : blocks) {
    for (const Document& d : b.documents) {
      after.insert(d.id);
      CHECK(d.timestamp_ms / kDayMs == static_cast<std::int64_t>(b.index));
    }
  }
  CHECK(before == after);
}

TEST_CASE("discretize rejects bad input") {
  std::vector<Document> unsorted;
  unsorted.push_back({"a", 5000, "later", SourceKind::article, {}});
  unsorted.push_back({"b", 100, "earlier", SourceKind::article, {}});
  CHECK_THROWS_MATCHES(discretize(std::move(unsorted), kDayMs, 0), Error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::StartsWith("UnsortedInput")));

  std::vector<Document> one;
  one.push_back({"a", 100, "text", SourceKind::article, {}});
  CHECK_THROWS_MATCHES(discretize(std::move(one), 0, 0), Error,
                       Catch::Matchers::MessageMatches(Catch::Matchers::
                           StartsWith("NonPositiveDuration")));

  std::vector<Document> late_origin;
  late_origin.push_back({"a", 100, "text", SourceKind::article, {}});
  CHECK_THROWS_MATCHES(discretize(std::move(late_origin), kDayMs, 500), Error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::StartsWith("InvalidArgument")));
}

TEST_CASE("negative timestamps land in floor-assigned blocks") {
  std::vector<Document> docs;
  docs.push_back({"a", -1, "before the origin day", SourceKind::article, {}});
  docs.push_back({"b", 10, "after", SourceKind::article, {}});
  auto blocks = discretize(std::move(docs), kDayMs, -kDayMs);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].documents.size() == 1);
  CHECK(blocks[1].documents.size() == 1);
}
