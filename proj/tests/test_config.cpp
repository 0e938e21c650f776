#include "gmt/config.hpp"

#include <doctest.h>

#include <sstream>

using namespace gmt;

TEST_CASE("parse sections, comments and typed values") {
  std::istringstream in(
      "# leading comment\n"
      "seed = 5\n"
      "\n"
      "[scan]\n"
      "  a = 0.5, -1 \n"
      "; another comment\n"
      "count=3\n"
      "on = true\n"
      "[entry]\nkind = line\n"
      "[entry]\nkind = cross\n");
  const Config c = Config::parse(in);
  CHECK(c.section("").integer("seed") == 5);
  const ConfigSection& s = c.section("scan");
  CHECK(s.numbers("a") == std::vector<double>{0.5, -1.0});
  CHECK(s.vector("a").size() == 2);
  CHECK(s.integer("count") == 3);
  CHECK(s.flag("on", false));
  CHECK(s.flag("off", true));
  CHECK(s.number("missing", 2.5) == 2.5);
  CHECK_THROWS_AS(s.number("missing"), ConfigError);
  CHECK_THROWS_AS(s.integer("a"), ConfigError);
  CHECK(c.all("entry").size() == 2);
  CHECK(c.all("entry")[1]->text("kind") == "cross");
  CHECK(c.find("nope") == nullptr);
  CHECK_THROWS_AS(c.section("nope"), ConfigError);
}

TEST_CASE("malformed input") {
  std::istringstream dup("[a]\nx = 1\nx = 2\n");
  CHECK_THROWS_AS(Config::parse(dup), ConfigError);
  std::istringstream no_eq("[a]\njust words\n");
  CHECK_THROWS_AS(Config::parse(no_eq), ConfigError);
  std::istringstream open("[a\nx = 1\n");
  CHECK_THROWS_AS(Config::parse(open), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/gmt.cfg"), IoError);
}

TEST_CASE("serialization round trip and hashing") {
  Config c;
  c.set("", "seed", "3");
  c.set("scan", "a", "0,0");
  c.set("scan", "threads", "4");
  const std::string text = c.serialize();
  std::istringstream in(text);
  CHECK(Config::parse(in).serialize() == text);
  CHECK(c.serialize({"threads"}).find("threads") == std::string::npos);

  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}
