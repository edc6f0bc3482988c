#include "csaug/cli.hpp"

#include "doctest.h"
#include "json.hpp"
#include "testing.hpp"

using namespace csaug;
using csaug::testing::run_cli;
using csaug::testing::TempDir;

namespace {

std::string fixture(const std::string& name) { return (csaug::testing::fixtures_dir() / name).string(); }

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("families prints the six registry rows") {
  const auto r = run_cli({"families"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "afro-asiatic\tAfro-Asiatic\tar,am,he,so\n"
        "germanic\tGermanic\tde,nl,da,sv,no\n"
        "indo-aryan\tIndo-Aryan\thi,bn,mr,ne,gu,pa\n"
        "romance\tRomance\tes,pt,fr,it,ro\n"
        "sino-tibetan-japonic\tSino-Tibetan & Japonic\tzh-cn,ja,ko\n"
        "turkic\tTurkic\ttr,az,ug,kk\n");
}

TEST_CASE("validate") {
  const auto ok = run_cli({"validate", fixture("train.tsv")});
  CHECK(ok.code == 0);
  CHECK(ok.out == "ok\t8\n");

  const auto bad = run_cli({"validate", fixture("bad_length.tsv")});
  CHECK(bad.code == 1);
  CHECK(bad.out.empty());
  CHECK(bad.err.find("bad-2") != std::string::npos);
  CHECK(bad.err.find("line 3") != std::string::npos);

  CHECK(run_cli({"validate", "/no/such/file.tsv"}).code == 1);
  CHECK(run_cli({"validate", fixture("train.tsv"), "--format", "xml"}).code == 64);
}

TEST_CASE("stats prints a header and one row") {
  const auto r = run_cli({"stats", fixture("train.tsv")});
  CHECK(r.code == 0);
  CHECK(r.out == "utterances\ttokens\tintents\tslot_types\tslot_tags\n8\t68\t5\t7\t9\n");
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("chunks prints one chunk per line") {
  TempDir dir;
  csaug::testing::write_file(dir / "one.tsv", "id\tutterance\tslot_labels\tintent\n"
                                              "u1\tto new york tomorrow\tO B-toloc I-toloc B-date\tflight\n");
  const auto r = run_cli({"chunks", (dir / "one.tsv").string()});
  CHECK(r.code == 0);
  CHECK(r.out == "# u1\n0..1\tO\tto\n1..3\ttoloc\tnew york\n3..4\tdate\ttomorrow\n");
}

TEST_CASE("augment matches the committed golden output") {
  TempDir dir;
  const auto out = (dir / "out.tsv").string();
  const auto r = run_cli({"augment", "-i", fixture("train.tsv"), "-o", out, "--level", "chunk", "--k", "5",
                          "--provider", "lex:" + fixture("lexicon"), "--exclude", "hi,tr", "--seed", "42"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(r.err.find("effective config") != std::string::npos);
  const auto written = csaug::testing::read_file(out);
  CHECK(count_lines(written) == 1 + 6 * 8);
  CHECK(written == csaug::testing::read_file(fixture("golden/augment_chunk_k5_seed42.tsv")));
}

TEST_CASE("augment is identical across worker counts and writes an audit log") {
  TempDir dir;
  std::vector<std::string> base = {"augment", "-i", fixture("train.tsv"), "--k", "3", "--provider",
                                   "lex:" + fixture("lexicon"), "--seed", "7", "--level", "word"};
  auto one = base, eight = base;
  one.insert(one.end(), {"-o", (dir / "1.tsv").string(), "--workers", "1", "--audit", (dir / "a.jsonl").string()});
  eight.insert(eight.end(), {"-o", (dir / "8.tsv").string(), "--workers", "8"});
  REQUIRE(run_cli(one).code == 0);
  REQUIRE(run_cli(eight).code == 0);
  CHECK(csaug::testing::read_file(dir / "1.tsv") == csaug::testing::read_file(dir / "8.tsv"));

  const auto audit = csaug::testing::read_file(dir / "a.jsonl");
  CHECK(count_lines(audit) == 24);
  const auto first = nlohmann::json::parse(audit.substr(0, audit.find('\n')));
  CHECK(first.at("id") == "atis-0001#cs1");
  CHECK(first.at("level") == "word");
}

TEST_CASE("family preset with the evaluation target excluded") {
  TempDir dir;
  for (const char* lang : {"tr", "az", "ug", "kk"}) {
    csaug::testing::write_file(dir / ("lex/en-" + std::string(lang) + ".tsv"), "boston\tboston-" + std::string(lang) + "\n");
  }
  const auto r = run_cli({"augment", "-i", fixture("train.tsv"), "-o", (dir / "o.tsv").string(), "--provider",
                          "lex:" + (dir / "lex").string(), "--family", "turkic", "--exclude", "tr", "--audit",
                          (dir / "a.jsonl").string()});
  REQUIRE(r.code == 0);
  std::istringstream lines(csaug::testing::read_file(dir / "a.jsonl"));
  std::set<std::string> used;
  for (std::string line; std::getline(lines, line);) {
    const auto record = nlohmann::json::parse(line);
    for (const auto& s : record.at("segments")) used.insert(s.at("language").get<std::string>());
  }
  CHECK(used == std::set<std::string>{"az", "kk", "ug"});

  const auto dry = run_cli({"augment", "-i", fixture("train.tsv"), "--family", "turkic", "--exclude", "tr",
                            "--dry-run", "--k", "2"});
  CHECK(dry.code == 0);
  CHECK(dry.out.find("\ttr\n") == std::string::npos);
  CHECK(dry.out.find("atis-0008#cs2\t") != std::string::npos);
}

TEST_CASE("augment exit codes") {
  TempDir dir;
  const auto out = (dir / "o.tsv").string();
  const auto lex = "lex:" + fixture("lexicon");
  CHECK(run_cli({"augment", "-i", fixture("train.tsv"), "-o", out, "--provider", lex, "--k", "0"}).code == 64);
  CHECK(run_cli({"augment", "-i", fixture("train.tsv"), "-o", out, "--provider", lex, "--level", "para"}).code == 64);
  CHECK(run_cli({"augment", "-i", fixture("train.tsv"), "-o", out, "--provider", lex, "--bogus"}).code == 64);
  CHECK(run_cli({"augment", "-i", fixture("train.tsv"), "-o", out}).code == 64);
  CHECK(run_cli({"augment", "-i", fixture("train.tsv"), "-o", out, "--provider", lex, "--allow", "aa", "--exclude",
                 "aa"}).code == 64);
  CHECK(run_cli({"augment", "-i", fixture("train.tsv"), "-o", out, "--provider", lex, "--family", "klingon"}).code ==
        64);
  CHECK(run_cli({"augment", "-i", fixture("bad_length.tsv"), "-o", out, "--provider", lex}).code == 1);
  CHECK(run_cli({"augment", "-i", fixture("train.tsv"), "-o", out, "--provider", "lex:/no/such/dir"}).code == 2);
  CHECK(run_cli({"augment", "-i", fixture("train.tsv"), "-o", out, "--provider", lex, "--allow", "zz"}).code == 2);
  CHECK(run_cli({"augment", "-i", fixture("train.tsv"), "-o", out, "--provider", "http:http://127.0.0.1:1"}).code ==
        2);
  CHECK(run_cli({}).code == 64);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("config file values apply and flags override them") {
  TempDir dir;
  csaug::testing::write_file(dir / "run.toml", "k = 2\nseed = 3\nlevel = \"sentence\"\ninclude-original = false\n");
  const auto lex = "lex:" + fixture("lexicon");
  const auto from_file = run_cli({"augment", "--config", (dir / "run.toml").string(), "-i", fixture("train.tsv"),
                                  "-o", (dir / "a.tsv").string(), "--provider", lex});
  REQUIRE(from_file.code == 0);
  CHECK(count_lines(csaug::testing::read_file(dir / "a.tsv")) == 1 + 2 * 8);
  CHECK(from_file.err.find("level = sentence") != std::string::npos);
  CHECK(from_file.err.find("include-original = false") != std::string::npos);

  const auto overridden = run_cli({"augment", "--config", (dir / "run.toml").string(), "-i", fixture("train.tsv"),
                                   "-o", (dir / "b.tsv").string(), "--provider", lex, "--k", "1"});
  REQUIRE(overridden.code == 0);
  CHECK(count_lines(csaug::testing::read_file(dir / "b.tsv")) == 1 + 8);

  csaug::testing::write_file(dir / "bad.toml", "kay = 2\n");
  CHECK(run_cli({"augment", "--config", (dir / "bad.toml").string(), "-i", fixture("train.tsv"), "-o",
                 (dir / "c.tsv").string(), "--provider", lex})
            .code == 64);
}

TEST_CASE("conll output format") {
  TempDir dir;
  const auto r = run_cli({"augment", "-i", fixture("train.tsv"), "-o", (dir / "o.conll").string(), "--output-format",
                          "conll", "--provider", "lex:" + fixture("lexicon"), "--k", "1"});
  REQUIRE(r.code == 0);
  CHECK(run_cli({"validate", (dir / "o.conll").string(), "--format", "conll"}).out == "ok\t16\n");
}

TEST_CASE("toy commands: generate, train, evaluate") {
  TempDir dir;
  const auto gen = run_cli({"toy-generate", "--out-dir", dir.path().string(), "--utterances", "20", "--seed", "7"});
  REQUIRE(gen.code == 0);
  CHECK(gen.out == "fam-a\tqaa,qab\nfam-b\tqba,qbb\nfam-c\tqca,qcb\n");

  const auto model = (dir / "m.bin").string();
  const auto train = run_cli({"toy-train", "-i", (dir / "qaa.train.tsv").string(), "-m", model, "--epochs", "3"});
  REQUIRE(train.code == 0);
  CHECK(train.out.starts_with("epoch\ttrain_loss\n0\t"));
  CHECK(count_lines(train.out) == 5);

  const auto eval = run_cli({"toy-eval", "-i", (dir / "qaa.test.tsv").string(), "-m", model, "--tables"});
  REQUIRE(eval.code == 0);
  CHECK(eval.out.starts_with("intent_accuracy\tslot_f1\ttoken_f1\n"));
  CHECK(eval.out.find("\nintent\tcorrect\ttotal\taccuracy\n") != std::string::npos);

  CHECK(run_cli({"toy-eval", "-i", (dir / "qaa.test.tsv").string(), "-m", (dir / "missing.bin").string()}).code == 1);
  CHECK(run_cli({"toy-train", "-i", (dir / "qaa.train.tsv").string(), "-m", model, "--alpha", "0", "--beta", "0"})
            .code == 64);
}
