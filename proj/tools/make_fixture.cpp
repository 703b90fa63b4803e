// Writes the deterministic synthetic fixtures.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "pragrank/synthetic.hpp"
#include "pragrank/text.hpp"

using namespace pragrank;

int main(int argc, char** argv) {
  CLI::App app{"Generate synthetic pragrank fixtures"};
  std::string dir;
  std::string kind = "corpus";
  synthetic::CorpusFixtureOptions options;
  std::size_t ranking_languages = 16;
  std::uint64_t ranking_seed = 11;
  app.add_option("dir", dir, "Output directory")->required();
  app.add_option("--kind", kind, "corpus or ranking")->capture_default_str();
  app.add_option("--languages", options.languages, "Languages in a corpus fixture")->capture_default_str();
  app.add_option("--seed", options.seed, "Corpus fixture seed")->capture_default_str();
  app.add_option("--ranking-languages", ranking_languages, "Languages in a ranking fixture")->capture_default_str();
  app.add_option("--ranking-seed", ranking_seed, "Ranking fixture seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    if (kind == "corpus") {
      std::cout << synthetic::write_corpus_fixture(dir, options) << "\n";
    } else if (kind == "ranking") {
      const auto fx = synthetic::ranking_fixture(ranking_languages, ranking_seed);
      const auto root = std::filesystem::path(dir);
      text::write_file((root / "features.csv").string(), features_to_csv(fx.features));
      text::write_file((root / "zero_shot.csv").string(), serialize(fx.zero_shot));
      std::cout << root.string() << "\n";
    } else {
      std::cerr << "unknown --kind '" << kind << "'\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
