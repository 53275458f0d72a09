#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "support.hpp"
#include "vecscope/cli.hpp"
#include "vecscope/vecstore.hpp"

using nlohmann::json;
using testing::TempDir;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = vecscope::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// king - man + woman lands on queen; the rest is distractor noise.
std::string analogy_store() {
  return "5 3\n"
         "king 1.0 0.2 0.1\n"
         "man 0.9 0.1 0.05\n"
         "woman 0.3 0.9 0.1\n"
         "queen 0.4 1.0 0.15\n"
         "apple -0.5 0.1 0.9\n";
}

}  // namespace

TEST_CASE("eval") {
  TempDir dir;
  auto toy = dir.write("toy.txt", testing::kToyWord2Vec).string();
  auto r = run({"--vectors", toy, "eval", "--expr", "man | (queen - king)", "--json"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["name"] == "(man | (queen - king))");
  CHECK(j["dim"] == 2);
  CHECK(j["vector"][0].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::fabs(j["vector"][1].get<double>()) <= 1e-12);
  CHECK(r.err.empty());

  auto text = run({"eval", "--expr", "queen - king", "--vectors", toy});
  CHECK(text.code == 0);
  CHECK(text.out.find("name: (queen - king)") != std::string::npos);
  CHECK(text.out.find("dim: 2") != std::string::npos);
}

TEST_CASE("similar with excluded inputs finds the analogy target") {
  TempDir dir;
  auto p = dir.write("a.txt", analogy_store()).string();
  auto r = run({"similar", "--vectors", p, "--expr", "king - man + woman", "-n", "2", "--exclude-inputs", "--json"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["name"] == "queen");
  for (const auto& item : j) CHECK(item["name"] != "king");
}

TEST_CASE("analogy subcommand") {
  TempDir dir;
  auto p = dir.write("a.txt", analogy_store()).string();
  auto r = run({"analogy", "--vectors", p, "--pos", "king,woman", "--neg", "man", "-n", "1", "--json"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)[0]["name"] == "queen");
  auto keep = run({"analogy", "--vectors", p, "--pos", "king,woman", "--neg", "man", "-n", "5", "--keep-inputs", "--json"});
  CHECK(json::parse(keep.out).size() == 5);
}

TEST_CASE("distance prints a symmetric matrix") {
  TempDir dir;
  auto toy = dir.write("toy.txt", testing::kToyWord2Vec).string();
  auto r = run({"distance", "--vectors", toy, "--words", "man,woman,king,queen", "--json"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["kind"] == "heatmap");
  const auto& v = j["values"];
  REQUIRE(v.size() == 4);
  for (std::size_t a = 0; a < 4; ++a) {
    CHECK(std::fabs(v[a][a].get<double>()) <= 1e-12);
    for (std::size_t b = 0; b < 4; ++b) CHECK(v[a][b] == v[b][a]);
  }
  auto text = run({"distance", "--vectors", toy, "--words", "man,woman,king,queen"});
  CHECK(std::count(text.out.begin(), text.out.end(), '\n') == 5);

  dir.write("pairs.csv", "queen,king\nwoman,man\n");
  auto pairs = run({"distance", "--vectors", toy, "--pairs-file", (dir.path() / "pairs.csv").string(), "--json"});
  REQUIRE(pairs.code == 0);
  CHECK(json::parse(pairs.out)["labels"] == json({"(queen - king)", "(woman - man)"}));

  auto svg = run({"distance", "--vectors", toy, "--words", "man,woman", "--svg"});
  CHECK(svg.out.rfind("<?xml", 0) == 0);
}

TEST_CASE("plot scatter and arrows") {
  TempDir dir;
  auto toy = dir.write("toy.txt", testing::kToyWord2Vec).string();
  dir.write("words.txt", "man\nwoman\n\nking\nqueen\n");
  auto r = run({"plot", "scatter", "--vectors", toy, "--words-file", (dir.path() / "words.txt").string(),
                "--x-axis", "man", "--y-axis", "woman"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["points"].size() == 4);
  CHECK(j["points"][2]["name"] == "king");
  CHECK(j["points"][2]["x"].get<double>() == doctest::Approx(1.473077).epsilon(1e-6));

  auto svg = run({"plot", "arrows", "--vectors", toy, "--words", "man,woman,king,queen,queen - king", "--svg"});
  REQUIRE(svg.code == 0);
  CHECK(svg.out.find("marker-end") != std::string::npos);

  auto out_file = (dir.path() / "chart.svg").string();
  auto to_file = run({"plot", "arrows", "--vectors", toy, "--words", "man", "--svg", "--output", out_file});
  CHECK(to_file.code == 0);
  CHECK(to_file.out.empty());
  CHECK(dir.read("chart.svg").rfind("<?xml", 0) == 0);
}

TEST_CASE("pca and mds") {
  TempDir dir;
  auto toy = dir.write("toy.txt", testing::kToyWord2Vec).string();
  auto r = run({"pca", "--vectors", toy, "--words", "man,woman,king,queen", "-k", "2", "--json"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["points"].size() == 6);
  CHECK(j["explained_variance"].size() == 2);
  auto m = run({"mds", "--vectors", toy, "--words", "man,woman,king", "-k", "2", "--metric", "euclidean", "--json"});
  REQUIRE(m.code == 0);
  CHECK_FALSE(json::parse(m.out).contains("explained_variance"));
  auto bad = run({"pca", "--vectors", toy, "--words", "man,woman", "-k", "3"});
  CHECK(bad.code == 1);
}

TEST_CASE("debias with overlap report") {
  TempDir dir;
  auto toy = dir.write("toy.txt", testing::kToyWord2Vec).string();
  auto pairs = dir.write("pairs.csv", "man,woman\n").string();
  auto r = run({"debias", "--vectors", toy, "--words", "man,woman,king,queen", "--pairs-file", pairs,
                "--report-token", "king", "-n", "2", "--json"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["axis"]["name"] == "bias_axis(1 pairs)");
  CHECK(j["items"].size() == 4);
  for (const auto& item : j["items"]) CHECK(std::fabs(item["vector"][1].get<double>()) <= 1e-12);
  CHECK(j["overlap"]["jaccard"].is_number());
}

TEST_CASE("featurize writes a headerless csv") {
  TempDir dir;
  auto toy = dir.write("toy.txt", testing::kToyWord2Vec).string();
  auto texts = dir.write("texts.txt", "man\nman woman\n").string();
  auto out = (dir.path() / "f.csv").string();
  auto r = run({"featurize", "--vectors", toy, "--texts-file", texts, "--out", out});
  REQUIRE(r.code == 0);
  CHECK(dir.read("f.csv") == "0.5,0.10000000000000001\n1,0.69999999999999996\n");
}

TEST_CASE("convert round trips") {
  TempDir dir;
  auto toy = dir.write("toy.txt", testing::kToyWord2Vec).string();
  auto out = (dir.path() / "toy.glove").string();
  auto r = run({"convert", "--vectors", toy, "--to", "glove", "--output", out});
  REQUIRE(r.code == 0);
  auto back = vecscope::load_store(out);
  CHECK(back.size() == 4);
  CHECK(vecscope::lookup(back, "queen").vector() == vecscope::Vector{0.7, 0.9});
  CHECK(run({"convert", "--vectors", toy, "--to", "glove"}).code == 2);
}

TEST_CASE("compare emits one chart per store in flag order") {
  TempDir dir;
  auto a = dir.write("toy.txt", testing::kToyWord2Vec).string();
  auto b = dir.write("other.txt", "man 1 0\nwoman 0 1\nking 1 1\nqueen 0.5 2\n").string();
  auto r = run({"compare", "--vectors", "second=" + b, "--vectors", a, "--words", "man,king",
                "--x-axis", "man", "--y-axis", "woman", "--json"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  REQUIRE(j["charts"].size() == 2);
  CHECK(j["charts"][0]["store"] == "second");
  CHECK(j["charts"][1]["store"] == "toy");
  auto svg = run({"compare", "--vectors", a, "--vectors", b, "--words", "man,king",
                  "--x-axis", "man", "--y-axis", "woman", "--svg"});
  CHECK(std::count(svg.out.begin(), svg.out.end(), '\n') > 10);
  auto oov = run({"compare", "--vectors", a, "--vectors", b, "--words", "man,tsar",
                  "--x-axis", "man", "--y-axis", "woman"});
  CHECK(oov.code == 1);
  CHECK(oov.err.find("toy") != std::string::npos);
}

TEST_CASE("exit codes and diagnostics") {
  TempDir dir;
  auto toy = dir.write("toy.txt", testing::kToyWord2Vec).string();
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"serve", "--help"}).code == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"similar", "--expr", "man"}).code == 2);
  CHECK(run({"frobnicate", "--vectors", toy}).code == 2);
  CHECK(run({"similar", "--vectors", toy}).code == 2);
  CHECK(run({"similar", "--vectors", toy, "--expr", "man", "--metric", "manhattan"}).code == 2);

  auto oov = run({"eval", "--vectors", toy, "--expr", "emperor - man"});
  CHECK(oov.code == 1);
  CHECK(oov.out.empty());
  CHECK(oov.err.find("\"emperor\"") != std::string::npos);

  dir.write("bad.txt", "a 1 2\nb 1 2 3\n");
  auto bad = run({"eval", "--vectors", (dir.path() / "bad.txt").string(), "--expr", "a"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("line 2") != std::string::npos);

  auto parse = run({"eval", "--vectors", toy, "--expr", "king -"});
  CHECK(parse.code == 1);
  CHECK(parse.err.find("offset 6") != std::string::npos);
}

TEST_CASE("warnings go to stderr, results to stdout") {
  TempDir dir;
  auto p = dir.write("dup.txt", "a 1 0\nb 0 1\na 1 1\n").string();
  auto r = run({"eval", "--vectors", p, "--expr", "a", "--json"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(json::parse(r.out)["vector"] == json({1.0, 0.0}));
}

TEST_CASE("json output is byte-stable") {
  TempDir dir;
  auto toy = dir.write("toy.txt", testing::kToyWord2Vec).string();
  const std::vector<std::vector<std::string>> cmds{
      {"similar", "--vectors", toy, "--expr", "king - man + woman", "-n", "4", "--json"},
      {"plot", "scatter", "--vectors", toy, "--words", "man,woman,king,queen", "--x-axis", "man", "--y-axis", "woman"},
      {"pca", "--vectors", toy, "--words", "man,woman,king,queen", "-k", "2", "--json"},
      {"distance", "--vectors", toy, "--words", "man,woman,king,queen", "--svg"},
  };
  for (const auto& c : cmds) {
    auto a = run(c), b = run(c);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}
