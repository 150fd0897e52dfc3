// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <string>

#include "gradprune/errors.hpp"
#include "gradprune/harness/metrics.hpp"
#include "support/temp_dir.hpp"

using namespace gradprune;
using namespace gradprune::testing;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("appended lines accumulate in order with trailing newlines") {
  MetricsLog log;
  log.append("{\"a\":1}");
  log.append("{\"b\":2}");
  REQUIRE(log.lines().size() == 2);
  CHECK(log.lines()[0] == "{\"a\":1}");
  CHECK(log.text() == "{\"a\":1}\n{\"b\":2}\n");
}

TEST_CASE("every append reaches the file immediately") {
  TempDir dir;
  MetricsLog log;
  log.open(dir.file("m.jsonl"));
  log.append("one");
  CHECK(slurp(dir.file("m.jsonl")) == "one\n");  // flushed before any close
  log.append("two");
  CHECK(slurp(dir.file("m.jsonl")) == "one\ntwo\n");
}

TEST_CASE("opening late replays what was logged before") {
  TempDir dir;
  MetricsLog log;
  log.append("early");
  log.open(dir.file("m.jsonl"));
  log.append("late");
  CHECK(slurp(dir.file("m.jsonl")) == "early\nlate\n");
  CHECK(log.text() == "early\nlate\n");
}

TEST_CASE("an unwritable path is a format error") {
  MetricsLog log;
  CHECK_THROWS_AS(log.open("/no/such/dir/m.jsonl"), FormatError);
}

TEST_CASE("the summary fields default to an incomplete run") {
  MetricsLog log;
  CHECK(log.completed == false);
  CHECK(log.final_test_accuracy == 0.0);
  CHECK(log.best_test_accuracy == 0.0);
  CHECK(log.final_active == 0);
  CHECK(log.dense_count == 0);
  CHECK(log.wall_seconds == 0.0);
}
