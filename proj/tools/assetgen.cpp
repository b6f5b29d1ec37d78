// Regenerates the frozen translator assets and their MANIFEST, or the
// portability fixtures built from those assets and the corpora.
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "ctlcode/assets.hpp"
#include "ctlcode/exec_arch.hpp"
#include "ctlcode/experiments.hpp"
#include "ctlcode/file_formats.hpp"
#include "ctlcode/portability.hpp"
#include "ctlcode/translators.hpp"

namespace fs = std::filesystem;
using namespace ctlcode;

namespace {

void write_fixtures(const fs::path& out, const fs::path& corpora) {
  const auto assets = load_assets(default_asset_dir());
  std::vector<std::string> programs;
  for (auto& t : read_corpus_texts(corpora / "src", ".src")) programs.push_back(std::move(t.text));
  write_port_fixture(out / "example3", scenario_example3(assets, programs));

  std::string concat;
  for (auto& t : read_corpus_texts(corpora / "src", ".src")) {
    if (t.name == "concat") concat = t.text;
  }
  if (concat.empty()) throw Error("corpora/src/concat.src is missing");
  write_port_fixture(out / "example4",
                     scenario_example4(assets, concat, read_corpus_data(corpora / "src")));

  // Example 3 as a plain instruction script: assemble the compiler in place.
  const auto ea = out / "ea-demo";
  fs::create_directories(ea);
  write_file(ea / "empty.snap", format_snapshot(EAState{}));
  write_file(ea / "demo.script",
             "set:fn1:" + bootstrap_assembler(assets).to_string() + "\n" +
                 "set:fn2:" + BitSeq::from_ascii(host_compile(assets.compil_prime)).to_string() +
                 "\n" + "load:fn1\nexe:fn2/fn3\n");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string usage =
      "usage: ctlcode-assetgen <asset-dir>\n"
      "       ctlcode-assetgen --fixtures <out-dir> <corpora-dir>\n";
  try {
    if (argc == 2) {
      write_assets(argv[1]);
    } else if (argc == 4 && std::string(argv[1]) == "--fixtures") {
      write_fixtures(argv[2], argv[3]);
    } else {
      std::cerr << usage;
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
