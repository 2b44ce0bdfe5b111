#include <doctest.h>

#include <filesystem>
#include <random>
#include <regex>
#include <sstream>

#include "fixtures.hpp"
#include "hpref/io.hpp"
#include "hpref/presets.hpp"

using namespace hpref;

namespace {

Dendrogram tiny_tree() {
  HprefConfig cfg;
  cfg.max_leaves = 3;
  return assign_weights(run_hpref(fixtures::tiny(), cfg));
}

ClusteringSet parse(const std::string& text) {
  std::istringstream in(text);
  return io::read_clusterings(in, "test");
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("hpref_test_" + name)).string();
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("clustering files round-trip") {
  const auto set = fixtures::tiny();
  std::ostringstream out;
  io::write_clusterings(set, out);
  const std::string text = out.str();
  CHECK(text.rfind("hpref-clusterings 1\nN 4 S 3\n", 0) == 0);
  CHECK(text.find("0 0 1 -1") != std::string::npos);
  CHECK(parse(text) == set);

  const auto path = temp_path("tiny.set");
  io::write_clusterings(set, path);
  CHECK(io::read_clusterings(path) == set);
  std::filesystem::remove(path);
}

TEST_CASE("clustering files round-trip on random sets") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 20, s = 1 + rng() % 6;
    std::vector<Clustering> cs;
    for (std::size_t r = 0; r < s; ++r) {
      const auto l = oracle::random_labels(rng, n, 5, true);
      Provenance p{{"run", std::to_string(r)}, {"note", "a \"quoted\" value, with comma"}};
      cs.push_back(Clustering(fixtures::to_clustering(l).labels(), p));
    }
    const ClusteringSet set(n, cs);
    std::ostringstream out;
    io::write_clusterings(set, out);
    CHECK(parse(out.str()) == set);
  }
}

TEST_CASE("labels are canonicalized on read") {
  const auto set = parse("hpref-clusterings 1\nN 4 S 1\n@ {}\n7 7 -1 3\n");
  CHECK(set[0].to_ints() == std::vector<std::int64_t>{0, 0, -1, 1});
}

TEST_CASE("malformed clustering files name the line") {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse(text);
    } catch (const io::ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("hpref-clusterings 1\nN 4 S 2\n@ {}\n0 0 1 1\n@ {}\n0 0 1\n") == 6);
  CHECK(line_of("clusterings\n") == 1);
  CHECK(line_of("hpref-clusterings 1\nN four S 1\n") == 2);
  CHECK(line_of("hpref-clusterings 1\nN 2 S 1\n@ {}\n0 x\n") == 4);
  CHECK(line_of("hpref-clusterings 1\nN 2 S 1\n@ {}\n0 -2\n") == 4);
  CHECK(line_of("hpref-clusterings 1\nN 2 S 1\n0 0\n") == 3);
  CHECK(line_of("hpref-clusterings 1\nN 2 S 1\n@ {\"a\": 1}\n0 0\n") == 3);
  CHECK(line_of("hpref-clusterings 1\nN 2 S 2\n@ {}\n0 0\n") == 4);
  CHECK(line_of("hpref-clusterings 1\nN 2 S 1\n@ {}\n0 0\n1 1\n") == 5);
  CHECK_THROWS_AS(io::read_clusterings(temp_path("missing.set")), io::IoError);
}

TEST_CASE("newick export") {
  const auto d = tiny_tree();
  CHECK(io::dendrogram_to_newick(d) == "(C3[&weight=0]:14,(C1[&weight=0]:4,C2[&weight=0]:4)[&weight=4]:10)[&weight=14];\n");

  HprefConfig one;
  const auto single = assign_weights(run_hpref(fixtures::tiny(), one));
  CHECK(io::dendrogram_to_newick(single) == "C1|C2|C3[&weight=10];\n");

  auto named = fixtures::tiny();
  std::vector<Clustering> cs{Clustering(named[0].labels(), {{"name", "eps 0.4, k=1"}}), named[1], named[2]};
  const auto q = assign_weights(run_hpref(ClusteringSet(4, cs), one));
  CHECK(io::dendrogram_to_newick(q) == "'eps 0.4, k=1|C2|C3'[&weight=10];\n");
}

TEST_CASE("dendrogram JSON round-trips byte for byte") {
  const auto d = tiny_tree();
  const std::string a = io::dendrogram_to_json(d);
  const auto back = io::dendrogram_from_json(a);
  CHECK(back == d);
  CHECK(io::dendrogram_to_json(back) == a);
  CHECK(a.find("\"format\": \"hpref-dendrogram\"") != std::string::npos);

  HprefConfig cfg;
  cfg.max_leaves = 7;
  cfg.sampling.pairs = 500;
  cfg.sampling.seed = 3;
  const auto iris = run_grid(presets::iris_dataset(), iris_grid(), 4);
  const auto big = assign_weights(run_hpref(iris, cfg));
  const std::string b = io::dendrogram_to_json(big);
  CHECK(io::dendrogram_to_json(io::dendrogram_from_json(b)) == b);
  CHECK(io::dendrogram_from_json(b).sample.seed == 3);

  const auto path = temp_path("tree.json");
  io::write_dendrogram(big, path);
  CHECK(io::read_dendrogram(path) == big);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(io::dendrogram_from_json("{}"), io::ParseError);
  CHECK_THROWS_AS(io::dendrogram_from_json("not json"), io::ParseError);
  std::string broken = a;
  broken.replace(broken.find("\"parent\": null"), 14, "\"parent\": 2");
  CHECK_THROWS_AS(io::dendrogram_from_json(broken), io::ParseError);
}

TEST_CASE("svg rendering") {
  const auto d = tiny_tree();
  const std::string svg = io::render_dendrogram_svg(d);
  CHECK(count(svg, "class=\"join\"") == 2);
  CHECK(svg.find("data-weight=\"4\"") != std::string::npos);
  CHECK(svg.find("data-weight=\"14\"") != std::string::npos);
  CHECK(count(svg, "class=\"leaf\"") == 3);
  CHECK(svg == io::render_dendrogram_svg(d));

  const auto colored = io::render_dendrogram_svg(d, cut(d, 2));
  CHECK(count(colored, "data-class=\"0\"") == 1);
  CHECK(count(colored, "data-class=\"1\"") == 2);
  CHECK_THROWS_AS(io::render_dendrogram_svg(d, Partition{{0, 2}, {1}}), std::invalid_argument);

  HprefConfig one;
  const auto single = assign_weights(run_hpref(fixtures::tiny(), one));
  const auto s1 = io::render_dendrogram_svg(single);
  CHECK(count(s1, "class=\"join\"") == 0);
  CHECK(count(s1, "class=\"leaf\"") == 1);
  CHECK_THROWS_AS(io::render_dendrogram_svg(run_hpref(fixtures::tiny(), one)), std::invalid_argument);
}

TEST_CASE("grid specs") {
  const auto g = io::parse_grid_spec(R"({"dbscan": {"eps": {"start": 0.05, "step": 0.05, "count": 20},
                                                   "min_pts": [1,2,3,4,5,6,7,8,9,10]}})");
  REQUIRE(g.dbscan);
  CHECK(g.size() == 200);
  CHECK(g.dbscan->eps == iris_grid().dbscan->eps);
  const auto k = io::parse_grid_spec(R"({"kmeans": {"k": 25, "uniform_runs": 20, "plusplus_runs": 20, "seed": 4}})");
  CHECK(k.size() == 40);
  CHECK(k.kmeans->seed == 4);
  CHECK_THROWS_AS(io::parse_grid_spec("{}"), io::ParseError);
  CHECK_THROWS_AS(io::parse_grid_spec(R"({"dbscan": {"eps": [], "min_pts": [1]}})"), io::ParseError);
  CHECK_THROWS_AS(io::parse_grid_spec(R"({"dbscan": {"eps": [-1], "min_pts": [1]}})"), io::ParseError);
  CHECK_THROWS_AS(io::parse_grid_spec(R"({"optics": {}})"), io::ParseError);
  CHECK_THROWS_AS(io::parse_grid_spec("[1,"), io::ParseError);
}

TEST_CASE("datasets and labels from text files") {
  const auto csv = temp_path("data.csv");
  io::write_text(csv, "x,y\n1,2\n3.5,4\n");
  const auto d = io::read_dataset_csv(csv);
  CHECK(d.size() == 2);
  CHECK(d.coord(1, 0) == 3.5);
  io::write_text(csv, "1,2\n3\n");
  CHECK_THROWS_AS(io::read_dataset_csv(csv), io::ParseError);

  const auto labels = temp_path("labels.txt");
  io::write_text(labels, "setosa\nsetosa\nvirginica\n");
  CHECK(io::read_labels(labels).to_ints() == std::vector<std::int64_t>{0, 0, 1});
  io::write_text(labels, "3, 3, -1, 0");
  CHECK(io::read_labels(labels).to_ints() == std::vector<std::int64_t>{0, 0, -1, 1});
  std::filesystem::remove(csv);
  std::filesystem::remove(labels);
}

TEST_CASE("partition and statistics tables") {
  const auto d = tiny_tree();
  const auto set = fixtures::tiny();
  const auto csv = io::partition_csv(cut(d, 2), &set);
  CHECK(csv == "row,class,name,provenance\n0,1,C1,name=C1\n1,1,C2,name=C2\n2,0,C3,name=C3\n");
  const auto st = io::class_stats_csv(class_stats({{0}, {1, 2}}, {1.0, 2.0, 4.0}, "phi"));
  CHECK(st == "class,size,statistic,mean,min,max,std\n0,1,phi,1,1,1,\n1,2,phi,3,2,4,1\n");
}

TEST_CASE("the bundled Iris CSV reads as the preset data") {
  const auto d = io::read_dataset_csv(HPREF_SOURCE_DIR "/data/iris.csv");
  const auto ref = presets::iris_dataset();
  REQUIRE(d.size() == 150);
  REQUIRE(d.dim() == 4);
  for (std::size_t i = 0; i < 150; ++i)
    for (std::size_t k = 0; k < 4; ++k) CHECK(d.coord(i, k) == ref.coord(i, k));
  const auto labels = io::read_labels(HPREF_SOURCE_DIR "/data/iris_species.txt");
  CHECK(labels.to_ints() == presets::iris_species().to_ints());
}
