#include "csaug/families.hpp"

#include "doctest.h"
#include "testing.hpp"

using namespace csaug;

TEST_CASE("registry matches the published family table") {
  const std::map<std::string, std::set<std::string>> expected = {
      {"afro-asiatic", {"ar", "am", "he", "so"}},
      {"germanic", {"de", "nl", "da", "sv", "no"}},
      {"indo-aryan", {"hi", "bn", "mr", "ne", "gu", "pa"}},
      {"romance", {"es", "pt", "fr", "it", "ro"}},
      {"sino-tibetan-japonic", {"zh-cn", "ja", "ko"}},
      {"turkic", {"tr", "az", "ug", "kk"}},
  };
  REQUIRE(family_registry().size() == expected.size());
  for (const auto& f : family_registry()) {
    CAPTURE(f.name);
    REQUIRE(expected.contains(f.name));
    CHECK(std::set<std::string>(f.members.begin(), f.members.end()) == expected.at(f.name));
    CHECK(f.members.size() == expected.at(f.name).size());
  }
}

TEST_CASE("family_members") {
  CHECK(family_members("turkic") == std::set<std::string>{"tr", "az", "ug", "kk"});
  CHECK(family_members("romance") == std::set<std::string>{"es", "pt", "fr", "it", "ro"});
  try {
    family_members("klingon");
    FAIL("expected UnknownFamily");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownFamily);
  }
}

TEST_CASE("scriptio continua and code syntax") {
  CHECK(is_scriptio_continua("zh-cn"));
  CHECK(is_scriptio_continua("ja"));
  CHECK_FALSE(is_scriptio_continua("ko"));
  CHECK_FALSE(is_scriptio_continua("en"));

  CHECK(is_language_code("en"));
  CHECK(is_language_code("zh-cn"));
  CHECK(is_language_code("qaa"));
  CHECK_FALSE(is_language_code("EN"));
  CHECK_FALSE(is_language_code("e"));
  CHECK_FALSE(is_language_code("en-"));
  CHECK_FALSE(is_language_code("english"));
}
